#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shipbreak/panel/units.hpp"

namespace shipbreak::panel {

struct Cell {
    double value = 0.0;
    Provenance provenance = Provenance::observed;
};

// Year-indexed sparse series used during assembly.
struct SparseSeries {
    std::string key;
    std::map<int, Cell> cells;

    bool has(int year) const { return cells.count(year) > 0; }
    double value(int year) const { return cells.at(year).value; }
    int first_year() const { return cells.begin()->first; }
    int last_year() const { return cells.rbegin()->first; }
};

// Splice calibration: scale series b onto series a's level using overlap
// year pairs (year_in_a, year_in_b). factor = mean over pairs of
// a[ya] / b[yb]. Pairs with ya != yb are legitimate (adjacent-year overlap)
// and reported via `adjacent_years`. max_discontinuity is
// max_i |ratio_i - factor| / |factor|, for splice diagnostics.
//
// Errors: NoOverlap if the pair list is empty or any year is missing from
// its series; ZeroDenominator if some b[yb] == 0 or the factor is 0.
struct CalibrationResult {
    double factor = 1.0;
    std::vector<double> ratios;
    double max_discontinuity = 0.0;
    bool adjacent_years = false;
};
CalibrationResult calibrate_overlap(
    const SparseSeries& a, const SparseSeries& b,
    const std::vector<std::pair<int, int>>& overlap);

// Splits a market total into directional values with the fixed ratio of a
// reference pair: east = total * e_ref / (e_ref + w_ref), west = total - east
// (the pair sums to total exactly). Errors: ZeroReference if
// e_ref + w_ref == 0; NonPositiveInput if total < 0 or a reference < 0.
struct DirectionalSplit {
    double east = 0.0;
    double west = 0.0;
};
DirectionalSplit allocate_directional(double total, double e_ref, double w_ref);

// Fills `fill_years` of `target` as r * reference[y], where r is the mean of
// target[y]/reference[y] over `anchor_years`. Observed target cells are never
// overwritten (those years are skipped). Filled cells get provenance
// ratio_imputed. Returns the ratio used.
//
// Errors: NoAnchor if anchor_years is empty or an anchor is missing from
// either series; ZeroDenominator if reference is 0 at an anchor;
// ReferenceGap if reference lacks a requested fill year.
double fixed_ratio_impute(SparseSeries& target, const SparseSeries& reference,
                          const std::vector<int>& anchor_years,
                          const std::vector<int>& fill_years);

// Linearly interpolates every missing year strictly inside the observed
// hull of `series` (or inside [span_first, span_last] intersected with the
// hull). New cells get provenance interpolated. Returns the filled years.
//
// Errors: ExtrapolationRequired if the requested span extends beyond the
// observed hull on either side; TooFewObservations if fewer than 2 cells.
std::vector<int> interpolate_linear(SparseSeries& series);
std::vector<int> interpolate_linear(SparseSeries& series, int span_first,
                                    int span_last);

// Sample moments of a value list (sd uses n-1). Errors: TooFewObservations
// if n < 2.
struct SummaryStats {
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};
SummaryStats summary_stats(const std::vector<double>& values);

} // namespace shipbreak::panel
