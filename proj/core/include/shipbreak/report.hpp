#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shipbreak/inference.hpp"
#include "shipbreak/selection.hpp"
#include "shipbreak/time_series.hpp"

namespace shipbreak {

struct AnalysisConfig {
    int min_len = 4;
    int max_m = 8;
    double level = 0.95;
    HeterogeneityFlags flags;
    std::optional<int> bandwidth;                  // HAC; default auto-rule
    std::optional<std::pair<int, int>> window;     // [first, last] periods

    bool operator==(const AnalysisConfig&) const;
};

struct FittedPoint {
    int period = 0;
    double observed = 0.0;
    double fitted = 0.0;
};

// Full result of analyzing one series: model-selection table, chosen
// segmentation with per-segment fits, break-date intervals, and the fitted
// step function for plotting.
struct BreakReport {
    std::string series_id;
    int first_period = 0;
    int last_period = 0;
    AnalysisConfig config;
    SelectionTable selection;
    std::vector<SegmentFit> segments;
    std::vector<BreakInterval> intervals;
    std::vector<FittedPoint> fitted;

    // Exact field-wise equality; NaN == NaN and -inf == -inf so serialized
    // sentinel values round-trip.
    bool operator==(const BreakReport& other) const;
};

// Window + select_breaks + fit_segments + confidence intervals (skipped when
// the chosen model has no breaks). Errors propagate from the underlying ops.
BreakReport analyze_series(const TimeSeries& series, const AnalysisConfig& config);

// Lossless JSON round-trip: break_report_from_json(break_report_to_json(r))
// compares equal to r. Output key order and number rendering are fixed, so
// serialization is byte-deterministic.
std::string break_report_to_json(const BreakReport& report);
BreakReport break_report_from_json(const std::string& json_text);

// CSV companions (deterministic, one table per file).
std::string selection_csv(const BreakReport& report);  // m,feasible,degenerate,ssr,bic,chosen
std::string breaks_csv(const BreakReport& report);     // break_number,index,period,lower,upper,level,zero_shift
std::string fit_csv(const BreakReport& report);        // period,observed,fitted

} // namespace shipbreak
