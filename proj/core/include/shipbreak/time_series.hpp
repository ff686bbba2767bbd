#pragma once

#include <string>
#include <vector>

#include "shipbreak/errors.hpp"

namespace shipbreak {

// A regularly spaced series y_t, t = 1..T, with optional per-period regressor
// rows z_t (row-major, T x q). When `regressors` is empty the series is
// intercept-only: z_t == (1) and q == 1.
struct TimeSeries {
    std::string id;
    std::vector<int> periods;       // strictly increasing, unit step
    std::vector<double> values;
    std::vector<double> regressors; // row-major length*regressor_dim, or empty
    int regressor_dim = 1;

    int length() const { return static_cast<int>(values.size()); }
    int q() const { return regressors.empty() ? 1 : regressor_dim; }
    bool intercept_only() const { return regressors.empty(); }

    // 1-based period index t, 0-based regressor column k.
    double regressor(int t, int k) const {
        if (regressors.empty()) return 1.0;
        return regressors[static_cast<std::size_t>(t - 1) * regressor_dim + k];
    }

    // Throws InvalidSeries on violated invariants (period grid, finiteness,
    // regressor shape).
    void validate() const;

    // Sub-series with periods in [first_period, last_period]; keeps id.
    TimeSeries window(int first_period, int last_period) const;

    static TimeSeries from_start(std::string id, int start_period,
                                 std::vector<double> values);
};

// Break dates as 1-based indices of the LAST observation of each regime
// (so breaks {4} on T=8 means regimes 1..4 and 5..8). Sorted ascending.
struct BreakSet {
    std::vector<int> indices;

    int count() const { return static_cast<int>(indices.size()); }

    // Throws InvalidBreaks unless every index lies in [min_len, t_len-min_len],
    // indices are strictly increasing, and all m+1 regime lengths >= min_len.
    void validate(int t_len, int min_len) const;

    bool operator==(const BreakSet&) const = default;
};

struct SegmentFit {
    int first = 0; // 1-based inclusive bounds
    int last = 0;
    std::vector<double> coefficients;
    double ssr = 0.0;
};

struct SegmentationResult {
    BreakSet breaks;
    double total_ssr = 0.0;
    std::vector<SegmentFit> segments; // empty unless segments were fitted
};

} // namespace shipbreak
