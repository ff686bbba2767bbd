#pragma once

#include <limits>
#include <vector>

#include "shipbreak/segmentation.hpp"

namespace shipbreak {

// Gaussian-likelihood BIC for a fitted segmentation:
//   BIC = T*(ln(2*pi*SSR/T) + 1) + p*ln(T),  p = (m+1)*q + m + 1
// (p counts segment coefficient blocks, break dates, and the variance).
// total_ssr <= 0 (perfect fit) yields -infinity as a sentinel; callers flag
// it via SelectionRow::degenerate rather than ranking it as a real score.
double bic(double total_ssr, int t_len, int m, int q);

struct SelectionRow {
    int m = 0;
    bool feasible = false;    // (m+1)*min_len <= T
    bool degenerate = false;  // SSR <= 0, sentinel BIC
    double total_ssr = std::numeric_limits<double>::quiet_NaN();
    double bic = std::numeric_limits<double>::quiet_NaN();
    BreakSet breaks;          // empty when infeasible
};

struct SelectionTable {
    std::vector<SelectionRow> rows; // m = 0..max_m, in order, none dropped
    int chosen_m = 0;

    const SelectionRow& row(int m) const { return rows.at(static_cast<std::size_t>(m)); }
};

struct SelectionResult {
    SelectionTable table;
    SegmentationResult best; // fitted segments for chosen_m
};

// Computes the SSR triangle once, runs optimal_breaks for every feasible
// m in 0..max_m, scores each with bic(), and picks the minimizer (smallest
// m on exact ties; degenerate rows win only against other degenerate rows
// of larger m — a 0-SSR fit is still the global SSR minimum, so the first
// degenerate m is chosen if any row is degenerate).
//
// Errors: SeriesTooShort if T < 2*min_len; InfeasibleBreakCount only if
// even m = 0 is infeasible (T < min_len); infeasible larger m are flagged
// rows, not errors.
SelectionResult select_breaks(const TimeSeries& series, int max_m, int min_len);

} // namespace shipbreak
