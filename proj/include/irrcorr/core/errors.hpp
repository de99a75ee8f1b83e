// Copyright 2026 The irrcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace irrcorr {

enum class ErrorKind {
    DuplicateLabel,
    UnknownSubsystem,
    SupportMismatch,
    OverlappingRegions,
    InvalidState,
    InvalidLattice,
    InvalidMask,
    DenseLimitExceeded,
    InconsistentMarginal,
    NotMarkov,
    DecompositionFailed,
    AssumptionViolated,
    ConvergenceFailure,
    DegeneracyAmbiguous,
    ConfigError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DuplicateLabel: return "DuplicateLabel";
        case ErrorKind::UnknownSubsystem: return "UnknownSubsystem";
        case ErrorKind::SupportMismatch: return "SupportMismatch";
        case ErrorKind::OverlappingRegions: return "OverlappingRegions";
        case ErrorKind::InvalidState: return "InvalidState";
        case ErrorKind::InvalidLattice: return "InvalidLattice";
        case ErrorKind::InvalidMask: return "InvalidMask";
        case ErrorKind::DenseLimitExceeded: return "DenseLimitExceeded";
        case ErrorKind::InconsistentMarginal: return "InconsistentMarginal";
        case ErrorKind::NotMarkov: return "NotMarkov";
        case ErrorKind::DecompositionFailed: return "DecompositionFailed";
        case ErrorKind::AssumptionViolated: return "AssumptionViolated";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::DegeneracyAmbiguous: return "DegeneracyAmbiguous";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace irrcorr
