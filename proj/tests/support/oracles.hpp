#pragma once

// Independent reference implementations used only by tests. Deliberately
// written with different algorithms than the library (two-pass moments,
// normal-equation OLS, quadrature, simulation) so agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Deterministic normals independent of libstdc++'s distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    // splitmix64
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { // in (0, 1)
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Two-pass mean/SSR over values[first..last] (0-based inclusive).
inline double mean_of(const std::vector<double>& v, int first, int last) {
    double s = 0.0;
    for (int t = first; t <= last; ++t) s += v[t];
    return s / (last - first + 1);
}

inline double segment_ssr(const std::vector<double>& v, int first, int last) {
    double m = mean_of(v, first, last);
    double ssr = 0.0;
    for (int t = first; t <= last; ++t) ssr += (v[t] - m) * (v[t] - m);
    return ssr;
}

// Enumerates all placements of m breaks (1-based last-index convention) with
// every segment >= min_len and reports the minimal total SSR with the
// lexicographically smallest argmin.
struct PartitionOptimum {
    std::vector<int> breaks;
    double total_ssr = 0.0;
};

inline PartitionOptimum enumerate_optimum(const std::vector<double>& v, int m,
                                          int min_len) {
    const int t_len = static_cast<int>(v.size());
    PartitionOptimum best;
    bool found = false;
    std::vector<int> cur(m);
    std::function<void(int, int, double)> rec = [&](int seg_start, int k, double acc) {
        if (k == m) {
            double total = acc + segment_ssr(v, seg_start - 1, t_len - 1);
            if (t_len - seg_start + 1 < min_len) return;
            if (!found || total < best.total_ssr) {
                found = true;
                best.total_ssr = total;
                best.breaks = cur;
            }
            return;
        }
        int remaining = (m - k) * min_len; // for segments after this one... including? breaks left: m-k; segments after current = m-k
        for (int j = seg_start + min_len - 1; j + remaining <= t_len; ++j) {
            cur[k] = j;
            rec(j + 1, k + 1, acc + segment_ssr(v, seg_start - 1, j - 1));
        }
    };
    rec(1, 0, 0.0);
    if (!found) throw std::runtime_error("enumerate_optimum: infeasible");
    return best;
}

// Adaptive Simpson quadrature.
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb, double whole,
                           double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, eps * 0.5, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, eps * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-11) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps, 60);
}

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// P(argmax V <= x) via numerical quadrature of the first-passage integral
// representation (independent route from the library's closed form).
// Conditions on the level M of the weaker side's maximum (exponential with
// the side's rate) and uses the drifted-BM first-passage CDF.
inline double argmax_cdf_quadrature(double x, double xi, double phi) {
    const double a1 = 1.0;        // left side: drift 1/2, variance 1
    const double a2 = xi / phi;   // right side: drift xi/2, variance phi
    auto passage_cdf = [](double horizon, double level, double mu, double var) {
        // P(first passage of BM with drift -mu, variance var to +level <= horizon)
        if (horizon <= 0.0) return 0.0;
        double s = std::sqrt(var * horizon);
        return norm_cdf((-mu * horizon - level) / s) +
               std::exp(-2.0 * mu * level / var) * norm_cdf((mu * horizon - level) / s);
    };
    double p0 = a2 / (a1 + a2); // P(left max beats right max)
    if (x == 0.0) return p0;
    // The integrands concentrate near m = 0 while the truncation bound is
    // large; integrate panel by panel with doubling widths so the adaptive
    // rule's initial probes can never straddle (and miss) all of the mass.
    auto panel_integrate = [](const std::function<double(double)>& f, double upper) {
        double total = 0.0, lo = 0.0;
        for (double hi = 0.25; lo < upper; hi *= 2.0) {
            if (hi > upper) hi = upper;
            total += integrate(f, lo, hi);
            lo = hi;
        }
        return total;
    };
    double upper = 60.0 / std::min(1.0, std::min(a1, a2));
    if (x > 0.0) {
        // P(argmax in (0, x]) integrates the joint law of (right-side max
        // level m, its first-passage time <= x) against P(left max < m).
        // Strong Markov at the first passage to m gives the joint density
        // P(M2 in dm, T_m <= x) = H2(x, m) * a2 dm, so
        // integrand = (1 - e^{-a1 m}) * a2 * H2(x, m) dm.
        auto g = [&](double m) {
            return (1.0 - std::exp(-a1 * m)) * a2 * passage_cdf(x, m, xi / 2.0, phi);
        };
        return p0 + panel_integrate(g, upper);
    }
    // For x < 0 (y = -x) the same decomposition yields the CDF directly:
    // P(argmax <= x) = P(M2 < M1, first passage to M1 is at or beyond y)
    //               = int (1 - e^{-a2 m}) * a1 * (e^{-a1 m} - H1(y, m)) dm,
    // since P(M1 in dm, T_m < y) = H1(y, m) * a1 dm and P(T_m < inf) = e^{-a1 m}.
    double y = -x;
    auto g = [&](double m) {
        return a1 * (1.0 - std::exp(-a2 * m)) *
               (std::exp(-a1 * m) - passage_cdf(y, m, 0.5, 1.0));
    };
    return panel_integrate(g, upper);
}

// Sample of argmax locations of the discretized two-sided process V,
// simulated on a grid of step `dt` over [-span, span]. Evaluate the
// empirical CDF against the library's closed form.
inline std::vector<double> argmax_sample(double xi, double phi, int reps,
                                         double span, double dt,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const int n = static_cast<int>(span / dt);
    const double sd_l = std::sqrt(dt), sd_r = std::sqrt(phi * dt);
    std::vector<double> out;
    out.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        double best = 0.0, arg = 0.0;
        double v = 0.0;
        for (int i = 1; i <= n; ++i) { // right side
            v += sd_r * rng.normal() - 0.5 * xi * dt;
            if (v > best) { best = v; arg = i * dt; }
        }
        v = 0.0;
        for (int i = 1; i <= n; ++i) { // left side
            v += sd_l * rng.normal() - 0.5 * dt;
            if (v > best) { best = v; arg = -(i * dt); }
        }
        out.push_back(arg);
    }
    return out;
}

inline double empirical_cdf(const std::vector<double>& sample, double x) {
    std::size_t hits = 0;
    for (double s : sample)
        if (s <= x) ++hits;
    return static_cast<double>(hits) / static_cast<double>(sample.size());
}

} // namespace oracle
