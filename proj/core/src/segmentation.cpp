#include "shipbreak/segmentation.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace shipbreak {

namespace {

// Direct OLS on rows [first, last] (1-based inclusive). Intercept-only
// segments use the closed-form mean; general segments Givens-rotate [Z y]
// into a triangular factor and back-substitute.
SegmentFit ols_segment(const TimeSeries& s, int first, int last) {
    SegmentFit fit;
    fit.first = first;
    fit.last = last;
    const int n = last - first + 1;
    if (s.intercept_only()) {
        double mean = 0.0, m2 = 0.0;
        int count = 0;
        for (int t = first; t <= last; ++t) {
            ++count;
            const double x = s.values[static_cast<std::size_t>(t - 1)];
            const double delta = x - mean;
            mean += delta / count;
            m2 += delta * (x - mean);
        }
        fit.coefficients = {mean};
        fit.ssr = m2 < 0.0 ? 0.0 : m2;
        return fit;
    }
    const int q = s.q();
    const int w = q + 1;
    std::vector<double> r(static_cast<std::size_t>(w) * w, 0.0);
    std::vector<double> x(static_cast<std::size_t>(w), 0.0);
    std::vector<double> colsq(static_cast<std::size_t>(q), 0.0);
    for (int t = first; t <= last; ++t) {
        for (int k = 0; k < q; ++k) {
            x[static_cast<std::size_t>(k)] = s.regressor(t, k);
            colsq[static_cast<std::size_t>(k)] +=
                x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
        }
        x[static_cast<std::size_t>(q)] = s.values[static_cast<std::size_t>(t - 1)];
        for (int k = 0; k < w; ++k) {
            double* rk = &r[static_cast<std::size_t>(k) * w];
            const double xk = x[static_cast<std::size_t>(k)];
            if (xk == 0.0) continue;
            const double rad = std::hypot(rk[k], xk);
            const double c = rk[k] / rad;
            const double sn = xk / rad;
            for (int col = k; col < w; ++col) {
                const double tmp = c * rk[col] + sn * x[static_cast<std::size_t>(col)];
                x[static_cast<std::size_t>(col)] =
                    -sn * rk[col] + c * x[static_cast<std::size_t>(col)];
                rk[col] = tmp;
            }
        }
    }
    for (int k = 0; k < q; ++k) {
        const double diag = std::fabs(r[static_cast<std::size_t>(k) * w + k]);
        if (n < q || diag <= 1e-10 * std::sqrt(colsq[static_cast<std::size_t>(k)])) {
            throw SingularSegment("series '" + s.id +
                                  "': regressors are rank-deficient on segment [" +
                                  std::to_string(first) + ", " + std::to_string(last) +
                                  "]");
        }
    }
    fit.coefficients.assign(static_cast<std::size_t>(q), 0.0);
    for (int k = q - 1; k >= 0; --k) {
        double acc = r[static_cast<std::size_t>(k) * w + q];
        for (int col = k + 1; col < q; ++col) {
            acc -= r[static_cast<std::size_t>(k) * w + col] *
                   fit.coefficients[static_cast<std::size_t>(col)];
        }
        fit.coefficients[static_cast<std::size_t>(k)] =
            acc / r[static_cast<std::size_t>(k) * w + k];
    }
    const double res = r[static_cast<std::size_t>(q) * w + q];
    fit.ssr = res * res;
    return fit;
}

} // namespace

SegmentationResult optimal_breaks(const SsrTriangle& tri, int m, int min_len) {
    if (m < 0) {
        throw InfeasibleBreakCount("break count must be >= 0, got " +
                                   std::to_string(m));
    }
    if (min_len < tri.min_len()) {
        throw InvalidBreaks("requested min_len " + std::to_string(min_len) +
                            " is below the triangle's resolution " +
                            std::to_string(tri.min_len()));
    }
    const int t_len = tri.t_len();
    if ((m + 1) * min_len > t_len) {
        throw InfeasibleBreakCount(std::to_string(m) + " breaks with min_len " +
                                   std::to_string(min_len) + " need " +
                                   std::to_string((m + 1) * min_len) +
                                   " observations; have " + std::to_string(t_len));
    }

    SegmentationResult result;
    if (m == 0) {
        result.total_ssr = tri.ssr(1, t_len);
        return result;
    }

    const double inf = std::numeric_limits<double>::infinity();
    // g[r][i]: minimal SSR of splitting [i, T] into r+1 segments of >= min_len.
    // choice[r][i]: the end of the first segment achieving it (smallest on ties,
    // which makes the reconstructed break vector lexicographically smallest).
    std::vector<std::vector<double>> g(
        static_cast<std::size_t>(m) + 1,
        std::vector<double>(static_cast<std::size_t>(t_len) + 2, inf));
    std::vector<std::vector<int>> choice(
        static_cast<std::size_t>(m) + 1,
        std::vector<int>(static_cast<std::size_t>(t_len) + 2, 0));
    for (int i = 1; i + min_len - 1 <= t_len; ++i) {
        g[0][static_cast<std::size_t>(i)] = tri.ssr(i, t_len);
    }
    for (int r = 1; r <= m; ++r) {
        // with r more breaks after the first segment, the first segment must
        // leave room for r+1 segments of min_len
        for (int i = 1; i + (r + 1) * min_len - 1 <= t_len; ++i) {
            double best = inf;
            int best_j = 0;
            const int j_lo = i + min_len - 1;
            const int j_hi = t_len - r * min_len;
            for (int j = j_lo; j <= j_hi; ++j) {
                const double cand =
                    tri.ssr(i, j) + g[static_cast<std::size_t>(r - 1)]
                                     [static_cast<std::size_t>(j + 1)];
                if (cand < best) {
                    best = cand;
                    best_j = j;
                }
            }
            g[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = best;
            choice[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = best_j;
        }
    }
    result.total_ssr = g[static_cast<std::size_t>(m)][1];
    int i = 1;
    for (int r = m; r >= 1; --r) {
        const int j = choice[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
        result.breaks.indices.push_back(j);
        i = j + 1;
    }
    return result;
}

SegmentationResult brute_force_optimal_breaks(const TimeSeries& series, int m,
                                              int min_len) {
    series.validate();
    const int t_len = series.length();
    if (t_len > 30 || m > 4) {
        throw OracleTooLarge("exhaustive search is limited to T <= 30 and m <= 4; "
                             "got T = " + std::to_string(t_len) + ", m = " +
                             std::to_string(m));
    }
    if (m < 0) {
        throw InfeasibleBreakCount("break count must be >= 0, got " +
                                   std::to_string(m));
    }
    if ((m + 1) * min_len > t_len) {
        throw InfeasibleBreakCount(std::to_string(m) + " breaks with min_len " +
                                   std::to_string(min_len) + " do not fit into " +
                                   std::to_string(t_len) + " observations");
    }

    // segment SSR cache to keep the enumeration honest but not glacial
    std::vector<std::vector<double>> seg_ssr(
        static_cast<std::size_t>(t_len) + 1,
        std::vector<double>(static_cast<std::size_t>(t_len) + 1, -1.0));
    auto ssr_of = [&](int a, int b) {
        double& slot = seg_ssr[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        if (slot < 0.0) slot = ols_segment(series, a, b).ssr;
        return slot;
    };

    std::vector<int> current(static_cast<std::size_t>(m), 0);
    std::vector<int> best_breaks;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;

    // enumerate break vectors in lexicographic order; strict improvement keeps
    // the first (smallest) vector among exact ties
    auto recurse = [&](auto&& self, int depth, int prev_end, double acc) -> void {
        if (depth == m) {
            const double total = acc + ssr_of(prev_end + 1, t_len);
            if (!found || total < best) {
                best = total;
                best_breaks = current;
                found = true;
            }
            return;
        }
        const int remaining = m - depth; // breaks still to place after this one
        for (int j = prev_end + min_len; j <= t_len - remaining * min_len; ++j) {
            current[static_cast<std::size_t>(depth)] = j;
            self(self, depth + 1, j, acc + ssr_of(prev_end + 1, j));
        }
    };
    recurse(recurse, 0, 0, 0.0);

    SegmentationResult result;
    result.breaks.indices = best_breaks;
    auto fitted = fit_segments(series, result.breaks);
    result.segments = std::move(fitted.segments);
    result.total_ssr = best;
    return result;
}

SegmentationResult fit_segments(const TimeSeries& series, const BreakSet& breaks) {
    series.validate();
    const int t_len = series.length();
    const int q = series.q();
    const int min_seg = std::max(1, q);
    breaks.validate(t_len, min_seg);

    SegmentationResult result;
    result.breaks = breaks;
    int first = 1;
    for (std::size_t k = 0; k <= breaks.indices.size(); ++k) {
        const int last =
            k < breaks.indices.size() ? breaks.indices[k] : t_len;
        auto fit = ols_segment(series, first, last);
        result.total_ssr += fit.ssr;
        result.segments.push_back(std::move(fit));
        first = last + 1;
    }
    return result;
}

} // namespace shipbreak
