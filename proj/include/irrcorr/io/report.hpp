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

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "irrcorr/approx/bounds.hpp"
#include "irrcorr/io/serialize.hpp"
#include "irrcorr/maxent/report.hpp"
#include "irrcorr/secret/rate.hpp"

namespace irrcorr::io {

/// JSON has no infinities; non-finite values are written as null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json residuals_to_json(const AnnulusResiduals &r) {
    return {{"I(A:B2C)", r.mi_a_b2c}, {"I(A:B2|B1)", r.cmi_a_b2}, {"I(B1:C|B2)", r.cmi_b1_c}, {"epsilon", r.worst()}};
}

inline json to_json(const CorrelationReport &r) {
    return {{"S_values", r.S_values},
            {"gamma", r.gamma},
            {"C3", r.C3},
            {"C2", r.C2},
            {"CT", r.CT},
            {"pairwise_mi_sum", r.pairwise_mi_sum},
            {"D_k", r.D_k},
            {"verdict", r.verdict},
            {"method", r.method},
            {"assumption_violated", r.assumption_violated},
            {"marginal_residual", r.marginal_residual},
            {"notes", r.notes}};
}

inline json to_json(const RateReport &r) {
    json bounds = json::array();
    for (const auto &b : r.N_bounds) {
        bounds.push_back({{"N", b.N},
                          {"count", b.count},
                          {"log_count", b.log_count},
                          {"polynomial_bound", b.polynomial_bound},
                          {"polynomial_holds", b.polynomial_holds},
                          {"literal_bound", number(b.literal_bound)},
                          {"literal_holds", b.literal_holds}});
    }
    json out = {{"geometry", r.geometry},
                {"S_bar", r.S_bar},
                {"S_tilde", r.S_tilde},
                {"S_rho", r.S_rho},
                {"C3", r.C3},
                {"logD", r.logD},
                {"D", r.D},
                {"cut_dim", r.cut_dim},
                {"slack", r.slack},
                {"marginal_error", r.marginal_error},
                {"monte_carlo", {{"samples", r.mc_samples},
                                 {"trace_norm_deviation", r.mc_deviation},
                                 {"max_entry_deviation", r.mc_max_entry},
                                 {"codebook_error", r.codebook_error}}},
                {"N_bounds", bounds}};
    if (r.S_bar_formula) out["S_bar_formula"] = *r.S_bar_formula;
    if (r.S_tilde_formula) out["S_tilde_formula"] = *r.S_tilde_formula;
    return out;
}

inline json to_json(const BoundReport &r) {
    return {{"residuals", residuals_to_json(r.residuals)},
            {"epsilon", r.params.epsilon},
            {"delta", r.params.delta},
            {"delta_achieved", r.delta_achieved},
            {"f_delta", r.f_delta},
            {"C_hat", r.c_hat},
            {"cmi", r.cmi},
            {"pinsker_step", {{"lhs", r.pinsker_lhs}, {"rhs", r.pinsker_rhs}, {"ok", r.pinsker_ok}}},
            {"recovery_step",
             {{"lhs_AB1B2", r.recovery_ab_lhs}, {"lhs_B1B2C", r.recovery_bc_lhs}, {"rhs", r.recovery_rhs}, {"ok", r.recovery_ok}}},
            {"fannes_step", {{"term", r.fannes_term}}},
            {"merged_cmi_step", {{"cmi_merged", r.cmi_merged}, {"bound", r.recovery_term}, {"ok", r.merged_cmi_ok}}},
            {"delta_membership", r.delta_ok},
            {"lower_inequality", {{"holds", r.lower_ok}, {"margin", r.c_hat - (r.cmi - 0.5 * r.f_delta)}}},
            {"upper_inequality", {{"holds", r.upper_ok}, {"margin", r.cmi - (r.c_hat - r.f_delta)}}},
            {"holds", r.holds()}};
}

/// Full-precision decimal for CSV cells.
inline std::string cell(double x) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return os.str();
}

inline std::string csv_header_correlation() { return "mask,gamma,C3,C2,CT,verdict,method,assumption_violated\n"; }

inline std::string csv_row(const std::string &mask, const CorrelationReport &r) {
    return mask + "," + cell(r.gamma) + "," + cell(r.C3) + "," + cell(r.C2) + "," + cell(r.CT) + "," + cell(r.verdict) +
           "," + r.method + "," + (r.assumption_violated ? "true" : "false") + "\n";
}

struct Series {
    std::string name;
    std::vector<double> y;
};

/// Minimal SVG line chart; x values shared by all series.
inline std::string svg_line_chart(const std::string &title, const std::string &xlabel, const std::vector<double> &x,
                                  const std::vector<Series> &series) {
    const double w = 640, h = 400, pad = 50;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!x.empty()) {
        xmin = *std::min_element(x.begin(), x.end());
        xmax = *std::max_element(x.begin(), x.end());
    }
    bool first = true;
    for (const auto &s : series) {
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            ymin = first ? v : std::min(ymin, v);
            ymax = first ? v : std::max(ymax, v);
            first = false;
        }
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double v) { return pad + (v - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto py = [&](double v) { return h - pad - (v - ymin) / (ymax - ymin) * (h - 2 * pad); };
    static constexpr const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::ostringstream os;
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    os << "<text x=\"" << pad << "\" y=\"" << h - pad + 15 << "\" text-anchor=\"middle\">" << xmin << "</text>\n";
    os << "<text x=\"" << w - pad << "\" y=\"" << h - pad + 15 << "\" text-anchor=\"middle\">" << xmax << "</text>\n";
    os << "<text x=\"" << pad - 5 << "\" y=\"" << h - pad << "\" text-anchor=\"end\">" << ymin << "</text>\n";
    os << "<text x=\"" << pad - 5 << "\" y=\"" << pad << "\" text-anchor=\"end\">" << ymax << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char *color = kColors[k % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
            if (std::isfinite(series[k].y[i])) os << px(x[i]) << "," << py(series[k].y[i]) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - pad + 5 << "\" y=\"" << pad + 15 * static_cast<double>(k) << "\" fill=\"" << color
           << "\">" << series[k].name << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace irrcorr::io
