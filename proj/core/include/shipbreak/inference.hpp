#pragma once

#include <optional>
#include <vector>

#include "shipbreak/time_series.hpp"

namespace shipbreak {

// Bartlett-kernel long-run (HAC) moment estimates for one fitted segment.
// cov is the q x q sandwich covariance of the segment coefficients,
// (1/n) Qinv Omega Qinv; omega is the q x q long-run covariance of z_t*u_t;
// long_run_variance is the scalar Bartlett long-run variance of the residual
// series itself (== omega[0][0] for intercept-only fits).
struct SegmentInference {
    int first = 0;
    int last = 0;
    std::vector<double> coefficients;
    std::vector<double> cov;    // row-major q x q
    std::vector<double> omega;  // row-major q x q
    double long_run_variance = 0.0;
    int bandwidth = 0;
};

// Bandwidth auto-rule: floor(4 * (n/100)^(2/9)). bandwidth 0 => White
// (no autocorrelation terms).
int bartlett_auto_bandwidth(int n);

// Per-segment robust moments for a fixed break vector. Errors:
// SegmentTooShort if some segment has fewer than q + 1 observations;
// SingularSegment on rank-deficient segments.
std::vector<SegmentInference> robust_segment_covariance(
    const TimeSeries& series, const BreakSet& breaks,
    std::optional<int> bandwidth = std::nullopt);

struct HeterogeneityFlags {
    bool het_regressors = true; // per-regime Q; false pools the whole sample
    bool het_errors = true;     // per-regime Omega; false pools the whole sample
};

struct BreakInterval {
    int break_index = 0;  // 1-based index (last observation of the regime)
    int break_period = 0;
    int lower_period = 0; // clamped to the sample, contains break_period
    int upper_period = 0;
    double level = 0.0;
    bool zero_shift = false; // adjacent coefficients equal within 1e-12;
                             // interval collapses to the point estimate
};

// Asymptotic confidence intervals for each break date. The deviation of the
// estimated date is distributed as argmax V (see argmax_dist.hpp) with
//   xi  = d'Q2 d / d'Q1 d,   phi = d'O2 d / d'O1 d,
//   scale = d'O1 d / (d'Q1 d)^2,
// d the coefficient shift across the break, Q the regime second-moment
// matrices, O the Bartlett long-run covariances of z_t*u_t (regimes 1 = pre,
// 2 = post). Interval endpoints are floor/ceil of point + quantile*scale,
// clamped to the sample and widened to contain the point estimate.
//
// Errors: NotEnoughBreaks if breaks is empty; SegmentTooShort /
// SingularSegment as in robust_segment_covariance. level must lie in (0, 1).
std::vector<BreakInterval> break_confidence_interval(
    const TimeSeries& series, const BreakSet& breaks, double level,
    HeterogeneityFlags flags = {},
    std::optional<int> bandwidth = std::nullopt);

} // namespace shipbreak
