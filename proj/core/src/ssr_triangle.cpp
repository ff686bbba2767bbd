#include "shipbreak/ssr_triangle.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace shipbreak {

namespace {

constexpr double kNegativeTolerance = 1e-9;

// Numerical guard applied when a cell is stored: squared residuals cannot be
// negative, and within a row (fixed start, growing end) they cannot decrease.
// Violations inside tolerance are floating-point wobble and get clamped;
// larger ones indicate a real defect and are fatal.
double clamp_cell(double cell, double prev_in_row, int i, int j) {
    if (cell < 0.0) {
        if (cell > -kNegativeTolerance) {
            cell = 0.0;
        } else {
            throw NumericalFault("ssr(" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") = " + std::to_string(cell) + " below tolerance");
        }
    }
    if (cell < prev_in_row) {
        if (prev_in_row - cell <= kNegativeTolerance * std::max(1.0, prev_in_row)) {
            cell = prev_in_row;
        } else {
            throw NumericalFault("ssr(" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") decreased along its row beyond tolerance");
        }
    }
    return cell;
}

// Intercept-only rows: streaming mean/M2 (Welford). M2 after n points is the
// SSR of the segment ending at the n-th point.
void fill_row_intercept(const TimeSeries& s, int i, int min_len,
                        std::vector<double>& cells) {
    double mean = 0.0, m2 = 0.0;
    int n = 0;
    const int t_len = s.length();
    double prev = 0.0;
    for (int j = i; j <= t_len; ++j) {
        ++n;
        const double x = s.values[static_cast<std::size_t>(j - 1)];
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
        if (j - i + 1 >= min_len) {
            const double cell = clamp_cell(m2, prev, i, j);
            prev = cell;
            cells.push_back(cell);
        }
    }
}

// General regressors: per appended row, Givens-rotate (z_t, y_t) into an
// upper-triangular factor R of [Z y]; the bottom-right entry squared is the
// segment SSR. colsq tracks column sums of squares for the rank check.
void fill_row_general(const TimeSeries& s, int i, int min_len,
                      std::vector<double>& cells) {
    const int q = s.q();
    const int w = q + 1;
    const int t_len = s.length();
    std::vector<double> r(static_cast<std::size_t>(w) * w, 0.0);
    std::vector<double> x(static_cast<std::size_t>(w), 0.0);
    std::vector<double> colsq(static_cast<std::size_t>(q), 0.0);
    double prev = 0.0;
    for (int j = i; j <= t_len; ++j) {
        for (int k = 0; k < q; ++k) {
            x[static_cast<std::size_t>(k)] = s.regressor(j, k);
            colsq[static_cast<std::size_t>(k)] +=
                x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
        }
        x[static_cast<std::size_t>(q)] = s.values[static_cast<std::size_t>(j - 1)];
        for (int k = 0; k < w; ++k) {
            double* rk = &r[static_cast<std::size_t>(k) * w];
            const double xk = x[static_cast<std::size_t>(k)];
            if (xk == 0.0) continue;
            const double rkk = rk[k];
            const double rad = std::hypot(rkk, xk);
            const double c = rkk / rad;
            const double sn = xk / rad;
            for (int col = k; col < w; ++col) {
                const double tmp = c * rk[col] + sn * x[static_cast<std::size_t>(col)];
                x[static_cast<std::size_t>(col)] =
                    -sn * rk[col] + c * x[static_cast<std::size_t>(col)];
                rk[col] = tmp;
            }
        }
        if (j - i + 1 >= min_len) {
            for (int k = 0; k < q; ++k) {
                const double diag = std::fabs(r[static_cast<std::size_t>(k) * w + k]);
                if (diag <= 1e-10 * std::sqrt(colsq[static_cast<std::size_t>(k)])) {
                    throw SingularSegment(
                        "series '" + s.id + "': regressors are rank-deficient on "
                        "segment [" + std::to_string(i) + ", " + std::to_string(j) +
                        "] (column " + std::to_string(k) + ")");
                }
            }
            const double res = r[static_cast<std::size_t>(q) * w + q];
            const double cell = clamp_cell(res * res, prev, i, j);
            prev = cell;
            cells.push_back(cell);
        }
    }
}

} // namespace

SsrTriangle compute_ssr_triangle(const TimeSeries& series, int min_len) {
    series.validate();
    if (min_len < 1) {
        throw InvalidBreaks("min_len must be >= 1, got " + std::to_string(min_len));
    }
    const int t_len = series.length();
    if (t_len < 2 * min_len) {
        throw SeriesTooShort("series '" + series.id + "' has " +
                             std::to_string(t_len) + " observations; need at least " +
                             std::to_string(2 * min_len) +
                             " (two segments of min_len " + std::to_string(min_len) +
                             ")");
    }
    SsrTriangle tri;
    tri.t_len_ = t_len;
    tri.min_len_ = min_len;
    tri.row_offset_.resize(static_cast<std::size_t>(t_len));
    std::size_t offset = 0;
    for (int i = 1; i <= t_len; ++i) {
        tri.row_offset_[static_cast<std::size_t>(i - 1)] = offset;
        const int count = t_len - (i + min_len - 1) + 1;
        if (count > 0) offset += static_cast<std::size_t>(count);
    }
    tri.cells_.reserve(offset);
    const bool intercept = series.intercept_only();
    for (int i = 1; i <= t_len; ++i) {
        if (i + min_len - 1 > t_len) break;
        if (intercept) {
            fill_row_intercept(series, i, min_len, tri.cells_);
        } else {
            fill_row_general(series, i, min_len, tri.cells_);
        }
    }
    return tri;
}

} // namespace shipbreak
