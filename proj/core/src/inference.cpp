#include "shipbreak/inference.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "shipbreak/argmax_dist.hpp"

namespace shipbreak {

namespace {

// Row-major q x q helpers; the matrices here are tiny (q is the number of
// regressors, 1 for intercept-only series).

// In-place lower Cholesky factor; false if the matrix is not positive
// definite to working precision.
bool cholesky(std::vector<double>& a, int q) {
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j <= i; ++j) {
            double acc = a[static_cast<std::size_t>(i) * q + j];
            for (int k = 0; k < j; ++k) {
                acc -= a[static_cast<std::size_t>(i) * q + k] *
                       a[static_cast<std::size_t>(j) * q + k];
            }
            if (i == j) {
                if (acc <= 0.0) return false;
                a[static_cast<std::size_t>(i) * q + j] = std::sqrt(acc);
            } else {
                a[static_cast<std::size_t>(i) * q + j] =
                    acc / a[static_cast<std::size_t>(j) * q + j];
            }
        }
    }
    return true;
}

void chol_solve(const std::vector<double>& l, int q, std::vector<double>& b) {
    for (int i = 0; i < q; ++i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) {
            acc -= l[static_cast<std::size_t>(i) * q + k] * b[static_cast<std::size_t>(k)];
        }
        b[static_cast<std::size_t>(i)] = acc / l[static_cast<std::size_t>(i) * q + i];
    }
    for (int i = q - 1; i >= 0; --i) {
        double acc = b[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < q; ++k) {
            acc -= l[static_cast<std::size_t>(k) * q + i] * b[static_cast<std::size_t>(k)];
        }
        b[static_cast<std::size_t>(i)] = acc / l[static_cast<std::size_t>(i) * q + i];
    }
}

double quad_form(const std::vector<double>& d, const std::vector<double>& a, int q) {
    double acc = 0.0;
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            acc += d[static_cast<std::size_t>(i)] *
                   a[static_cast<std::size_t>(i) * q + j] * d[static_cast<std::size_t>(j)];
        }
    }
    return acc;
}

struct Moments {
    int first = 0;
    int last = 0;
    int n = 0;
    int bandwidth = 0;
    std::vector<double> coefficients;
    std::vector<double> q_mat;  // (1/n) sum z z'
    std::vector<double> omega;  // Bartlett long-run covariance of z*u
    std::vector<double> resid;  // in segment order
    double lrv = 0.0;           // Bartlett long-run variance of u itself
};

int effective_bandwidth(int n, const std::optional<int>& requested) {
    int bw = requested ? *requested : bartlett_auto_bandwidth(n);
    if (bw < 0) {
        throw ConfigError("HAC bandwidth must be >= 0, got " + std::to_string(bw));
    }
    if (bw > n - 1) bw = n - 1;
    return bw;
}

// Bartlett-weighted long-run covariance of the scores v_t (n rows of dim q).
std::vector<double> bartlett_lrcov(const std::vector<double>& v, int n, int q, int bw) {
    std::vector<double> omega(static_cast<std::size_t>(q) * q, 0.0);
    for (int lag = 0; lag <= bw; ++lag) {
        const double weight =
            lag == 0 ? 1.0 : 1.0 - static_cast<double>(lag) / (bw + 1);
        for (int t = lag; t < n; ++t) {
            const double* vt = &v[static_cast<std::size_t>(t) * q];
            const double* vs = &v[static_cast<std::size_t>(t - lag) * q];
            for (int i = 0; i < q; ++i) {
                for (int j = 0; j < q; ++j) {
                    const double term = weight * vt[i] * vs[j] / n;
                    omega[static_cast<std::size_t>(i) * q + j] += term;
                    if (lag > 0) omega[static_cast<std::size_t>(j) * q + i] += term;
                }
            }
        }
    }
    return omega;
}

Moments compute_moments(const TimeSeries& s, int first, int last,
                        const std::optional<int>& bw_request) {
    Moments m;
    m.first = first;
    m.last = last;
    m.n = last - first + 1;
    const int q = s.q();
    if (m.n < q + 1) {
        throw SegmentTooShort("segment [" + std::to_string(first) + ", " +
                              std::to_string(last) + "] has " + std::to_string(m.n) +
                              " observations; robust moments need at least " +
                              std::to_string(q + 1));
    }

    // OLS via normal equations (q is tiny)
    std::vector<double> zz(static_cast<std::size_t>(q) * q, 0.0);
    std::vector<double> zy(static_cast<std::size_t>(q), 0.0);
    for (int t = first; t <= last; ++t) {
        for (int i = 0; i < q; ++i) {
            const double zi = s.regressor(t, i);
            zy[static_cast<std::size_t>(i)] += zi * s.values[static_cast<std::size_t>(t - 1)];
            for (int j = 0; j < q; ++j) {
                zz[static_cast<std::size_t>(i) * q + j] += zi * s.regressor(t, j);
            }
        }
    }
    m.q_mat.resize(static_cast<std::size_t>(q) * q);
    for (std::size_t k = 0; k < zz.size(); ++k) m.q_mat[k] = zz[k] / m.n;
    std::vector<double> chol = zz;
    if (!cholesky(chol, q)) {
        throw SingularSegment("segment [" + std::to_string(first) + ", " +
                              std::to_string(last) +
                              "]: regressor cross-product is singular");
    }
    m.coefficients = zy;
    chol_solve(chol, q, m.coefficients);

    m.resid.resize(static_cast<std::size_t>(m.n));
    std::vector<double> scores(static_cast<std::size_t>(m.n) * q);
    for (int t = first; t <= last; ++t) {
        double fit = 0.0;
        for (int i = 0; i < q; ++i) {
            fit += s.regressor(t, i) * m.coefficients[static_cast<std::size_t>(i)];
        }
        const double u = s.values[static_cast<std::size_t>(t - 1)] - fit;
        m.resid[static_cast<std::size_t>(t - first)] = u;
        for (int i = 0; i < q; ++i) {
            scores[static_cast<std::size_t>(t - first) * q + i] = s.regressor(t, i) * u;
        }
    }

    m.bandwidth = effective_bandwidth(m.n, bw_request);
    m.omega = bartlett_lrcov(scores, m.n, q, m.bandwidth);
    m.lrv = bartlett_lrcov(m.resid, m.n, 1, m.bandwidth)[0];
    return m;
}

std::vector<std::pair<int, int>> segment_bounds(const BreakSet& breaks, int t_len) {
    std::vector<std::pair<int, int>> bounds;
    int first = 1;
    for (std::size_t k = 0; k <= breaks.indices.size(); ++k) {
        const int last =
            k < breaks.indices.size() ? breaks.indices[k] : t_len;
        bounds.emplace_back(first, last);
        first = last + 1;
    }
    return bounds;
}

} // namespace

int bartlett_auto_bandwidth(int n) {
    if (n < 1) {
        throw ConfigError("bandwidth rule needs n >= 1, got " + std::to_string(n));
    }
    return static_cast<int>(
        std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

std::vector<SegmentInference> robust_segment_covariance(
    const TimeSeries& series, const BreakSet& breaks,
    std::optional<int> bandwidth) {
    series.validate();
    const int t_len = series.length();
    breaks.validate(t_len, 1);
    const int q = series.q();

    std::vector<SegmentInference> out;
    for (const auto& [first, last] : segment_bounds(breaks, t_len)) {
        auto m = compute_moments(series, first, last, bandwidth);
        SegmentInference inf;
        inf.first = first;
        inf.last = last;
        inf.coefficients = m.coefficients;
        inf.omega = m.omega;
        inf.long_run_variance = m.lrv;
        inf.bandwidth = m.bandwidth;

        // sandwich: (1/n) Qinv Omega Qinv
        std::vector<double> chol = m.q_mat;
        if (!cholesky(chol, q)) {
            throw SingularSegment("segment [" + std::to_string(first) + ", " +
                                  std::to_string(last) + "]: singular second moment");
        }
        std::vector<double> cov(static_cast<std::size_t>(q) * q);
        std::vector<double> col(static_cast<std::size_t>(q));
        // X = Qinv * Omega  (column by column), then cov = X * Qinv via
        // solving on the transpose; all matrices symmetric
        std::vector<double> x(static_cast<std::size_t>(q) * q);
        for (int j = 0; j < q; ++j) {
            for (int i = 0; i < q; ++i) col[static_cast<std::size_t>(i)] = m.omega[static_cast<std::size_t>(i) * q + j];
            chol_solve(chol, q, col);
            for (int i = 0; i < q; ++i) x[static_cast<std::size_t>(i) * q + j] = col[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < q; ++i) {
            for (int j = 0; j < q; ++j) col[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(i) * q + j];
            chol_solve(chol, q, col);
            for (int j = 0; j < q; ++j) cov[static_cast<std::size_t>(i) * q + j] = col[static_cast<std::size_t>(j)] / m.n;
        }
        inf.cov = std::move(cov);
        out.push_back(std::move(inf));
    }
    return out;
}

std::vector<BreakInterval> break_confidence_interval(
    const TimeSeries& series, const BreakSet& breaks, double level,
    HeterogeneityFlags flags, std::optional<int> bandwidth) {
    if (!(level > 0.0) || !(level < 1.0)) {
        throw ConfigError("confidence level must lie in (0, 1); got " +
                          std::to_string(level));
    }
    if (breaks.count() == 0) {
        throw NotEnoughBreaks("confidence intervals need at least one break");
    }
    series.validate();
    const int t_len = series.length();
    breaks.validate(t_len, 1);
    const int q = series.q();

    const auto bounds = segment_bounds(breaks, t_len);
    std::vector<Moments> seg;
    seg.reserve(bounds.size());
    for (const auto& [first, last] : bounds) {
        seg.push_back(compute_moments(series, first, last, bandwidth));
    }

    // pooled moments over the full sample (used when a heterogeneity flag is
    // off): Q from all regressor rows, Omega from the segmented fit's full
    // residual sequence
    std::vector<double> pooled_q;
    std::vector<double> pooled_omega;
    if (!flags.het_regressors || !flags.het_errors) {
        pooled_q.assign(static_cast<std::size_t>(q) * q, 0.0);
        for (int t = 1; t <= t_len; ++t) {
            for (int i = 0; i < q; ++i) {
                for (int j = 0; j < q; ++j) {
                    pooled_q[static_cast<std::size_t>(i) * q + j] +=
                        series.regressor(t, i) * series.regressor(t, j) / t_len;
                }
            }
        }
        std::vector<double> scores(static_cast<std::size_t>(t_len) * q);
        for (const auto& s : seg) {
            for (int t = s.first; t <= s.last; ++t) {
                const double u = s.resid[static_cast<std::size_t>(t - s.first)];
                for (int i = 0; i < q; ++i) {
                    scores[static_cast<std::size_t>(t - 1) * q + i] =
                        series.regressor(t, i) * u;
                }
            }
        }
        pooled_omega = bartlett_lrcov(scores, t_len, q,
                                      effective_bandwidth(t_len, bandwidth));
    }

    const double alpha = 1.0 - level;
    std::vector<BreakInterval> out;
    for (int k = 0; k < breaks.count(); ++k) {
        const auto& pre = seg[static_cast<std::size_t>(k)];
        const auto& post = seg[static_cast<std::size_t>(k) + 1];
        const int b = breaks.indices[static_cast<std::size_t>(k)];

        BreakInterval iv;
        iv.break_index = b;
        iv.break_period = series.periods[static_cast<std::size_t>(b - 1)];
        iv.level = level;

        std::vector<double> d(static_cast<std::size_t>(q));
        double max_shift = 0.0;
        for (int i = 0; i < q; ++i) {
            d[static_cast<std::size_t>(i)] =
                post.coefficients[static_cast<std::size_t>(i)] -
                pre.coefficients[static_cast<std::size_t>(i)];
            max_shift = std::max(max_shift, std::fabs(d[static_cast<std::size_t>(i)]));
        }
        if (max_shift <= 1e-12) {
            iv.zero_shift = true;
            iv.lower_period = iv.break_period;
            iv.upper_period = iv.break_period;
            out.push_back(iv);
            continue;
        }

        const auto& q1 = flags.het_regressors ? pre.q_mat : pooled_q;
        const auto& q2 = flags.het_regressors ? post.q_mat : pooled_q;
        const auto& o1 = flags.het_errors ? pre.omega : pooled_omega;
        const auto& o2 = flags.het_errors ? post.omega : pooled_omega;
        const double dq1 = quad_form(d, q1, q);
        const double dq2 = quad_form(d, q2, q);
        const double do1 = quad_form(d, o1, q);
        const double do2 = quad_form(d, o2, q);
        if (dq1 <= 0.0 || dq2 <= 0.0) {
            throw SingularSegment("break " + std::to_string(b) +
                                  ": shift direction has no regressor variation");
        }

        int lower_idx = b;
        int upper_idx = b;
        if (do1 > 0.0 && do2 > 0.0) {
            const double xi = dq2 / dq1;
            const double phi = do2 / do1;
            const double scale = do1 / (dq1 * dq1);
            const double q_lo = break_argmax_quantile(alpha / 2.0, xi, phi);
            const double q_hi = break_argmax_quantile(1.0 - alpha / 2.0, xi, phi);
            // (estimate - truth) / scale converges to the argmax law, so the
            // upper quantile bounds the truth from below and vice versa
            double lo_d = b - std::ceil(q_hi * scale);
            double hi_d = b - std::floor(q_lo * scale);
            lo_d = std::max(1.0, std::min(lo_d, static_cast<double>(t_len)));
            hi_d = std::max(1.0, std::min(hi_d, static_cast<double>(t_len)));
            lower_idx = std::min(static_cast<int>(lo_d), b);
            upper_idx = std::max(static_cast<int>(hi_d), b);
        }
        // with zero long-run noise the date is exact: interval collapses
        iv.lower_period = series.periods[static_cast<std::size_t>(lower_idx - 1)];
        iv.upper_period = series.periods[static_cast<std::size_t>(upper_idx - 1)];
        out.push_back(iv);
    }
    return out;
}

} // namespace shipbreak
