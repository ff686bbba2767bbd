#pragma once

#include <cstddef>
#include <vector>

#include "shipbreak/time_series.hpp"

namespace shipbreak {

// Precomputed least-squares SSR for every admissible segment [i, j]
// (1-based inclusive, j - i + 1 >= min_len). Immutable after construction;
// safe to read concurrently.
//
// Invariants: ssr(i, j) >= 0 and ssr(i, j) <= ssr(i, j+1) for fixed i
// (a superset sample cannot fit better at the segment optimum).
class SsrTriangle {
public:
    int t_len() const { return t_len_; }
    int min_len() const { return min_len_; }

    bool admissible(int i, int j) const {
        return i >= 1 && j <= t_len_ && j - i + 1 >= min_len_;
    }

    double ssr(int i, int j) const {
        if (!admissible(i, j)) {
            throw InvalidBreaks("ssr(" + std::to_string(i) + ", " + std::to_string(j) +
                                "): segment shorter than min_len or out of range");
        }
        return cells_[row_offset_[i - 1] + static_cast<std::size_t>(j - (i + min_len_ - 1))];
    }

private:
    friend SsrTriangle compute_ssr_triangle(const TimeSeries&, int);
    int t_len_ = 0;
    int min_len_ = 1;
    std::vector<double> cells_;             // row i: j = i+min_len-1 .. T
    std::vector<std::size_t> row_offset_;   // start of row i's cells
};

// Builds the full triangle in O(T^2) for intercept-only series (streaming
// mean/SSR updates) or O(T^2 q^2) in general (rank-one updates of a
// triangular factor of [Z y] per appended row).
//
// Errors: SeriesTooShort if T < 2*min_len; InvalidSeries via validate();
// SingularSegment if some admissible segment's regressor cross-product is
// rank-deficient; NumericalFault if a cell is negative beyond tolerance.
SsrTriangle compute_ssr_triangle(const TimeSeries& series, int min_len);

} // namespace shipbreak
