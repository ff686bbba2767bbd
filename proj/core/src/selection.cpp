#include "shipbreak/selection.hpp"

#include <cmath>
#include <limits>

namespace shipbreak {

double bic(double total_ssr, int t_len, int m, int q) {
    if (total_ssr <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    const double t = static_cast<double>(t_len);
    const double p = static_cast<double>((m + 1) * q + m + 1);
    return t * (std::log(2.0 * M_PI * total_ssr / t) + 1.0) + p * std::log(t);
}

SelectionResult select_breaks(const TimeSeries& series, int max_m, int min_len) {
    if (max_m < 0) {
        throw InfeasibleBreakCount("max_m must be >= 0, got " + std::to_string(max_m));
    }
    auto tri = compute_ssr_triangle(series, min_len); // validates; SeriesTooShort
    const int t_len = series.length();
    const int q = series.q();

    SelectionResult result;
    result.table.rows.reserve(static_cast<std::size_t>(max_m) + 1);
    for (int m = 0; m <= max_m; ++m) {
        SelectionRow row;
        row.m = m;
        row.feasible = (m + 1) * min_len <= t_len;
        if (row.feasible) {
            auto seg = optimal_breaks(tri, m, min_len);
            row.total_ssr = seg.total_ssr;
            row.bic = bic(seg.total_ssr, t_len, m, q);
            row.degenerate = std::isinf(row.bic) && row.bic < 0.0;
            row.breaks = std::move(seg.breaks);
        }
        result.table.rows.push_back(std::move(row));
    }

    // A zero-SSR fit is the unbeatable SSR minimum; the smallest m achieving
    // it wins. Otherwise the finite-BIC minimizer wins, smallest m on ties.
    int chosen = -1;
    for (const auto& row : result.table.rows) {
        if (row.feasible && row.degenerate) {
            chosen = row.m;
            break;
        }
    }
    if (chosen < 0) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& row : result.table.rows) {
            if (!row.feasible) continue;
            if (row.bic < best) {
                best = row.bic;
                chosen = row.m;
            }
        }
    }
    if (chosen < 0) {
        throw InfeasibleBreakCount("no feasible break count for T = " +
                                   std::to_string(t_len) + " at min_len " +
                                   std::to_string(min_len));
    }
    result.table.chosen_m = chosen;
    result.best = fit_segments(series, result.table.row(chosen).breaks);
    return result;
}

} // namespace shipbreak
