#pragma once

#include "shipbreak/ssr_triangle.hpp"
#include "shipbreak/time_series.hpp"

namespace shipbreak {

// Exact global minimizer of total SSR over all placements of m breaks with
// per-segment length >= min_len, by dynamic programming over the triangle.
// Ties in total SSR resolve to the lexicographically smallest break vector.
// m == 0 returns the whole-sample fit (no breaks). Segment fits are not
// populated; use fit_segments for coefficients.
//
// Errors: InfeasibleBreakCount if (m+1)*min_len > T or m < 0;
// InvalidBreaks if min_len < triangle's min_len.
SegmentationResult optimal_breaks(const SsrTriangle& tri, int m, int min_len);

// Exhaustive-enumeration reference implementation with direct per-segment
// OLS (no triangle, no recursion sharing). Same tie-break rule. Intended as
// a cross-check on small instances only: guards T <= 30 and m <= 4, else
// throws OracleTooLarge. Populates segment fits.
SegmentationResult brute_force_optimal_breaks(const TimeSeries& series, int m,
                                              int min_len);

// Per-segment OLS for a fixed break vector; populates coefficients and SSRs,
// total_ssr = sum of segment SSRs. Errors: InvalidBreaks if the break vector
// does not partition 1..T with each segment >= max(1, q) observations;
// SingularSegment on rank-deficient segments.
SegmentationResult fit_segments(const TimeSeries& series, const BreakSet& breaks);

} // namespace shipbreak
