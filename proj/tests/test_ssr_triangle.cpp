#include "doctest.h"

#include <cmath>
#include <vector>

#include "shipbreak/ssr_triangle.hpp"
#include "support/oracles.hpp"

using shipbreak::SsrTriangle;
using shipbreak::TimeSeries;
using shipbreak::compute_ssr_triangle;

namespace {
TimeSeries make(std::vector<double> v, int min_start = 1970) {
    return TimeSeries::from_start("s", min_start, std::move(v));
}
} // namespace

TEST_CASE("triangle: hand-checked cells") {
    // constant segment fits exactly
    auto tri = compute_ssr_triangle(make({1.0, 1.0, 1.0}), 1);
    CHECK(tri.ssr(1, 3) == 0.0);
    CHECK(tri.ssr(1, 1) == 0.0);
    CHECK(tri.ssr(2, 3) == 0.0);

    // two points, mean 1: (0-1)^2 + (2-1)^2 = 2
    auto tri2 = compute_ssr_triangle(make({0.0, 2.0}), 1);
    CHECK(tri2.ssr(1, 2) == doctest::Approx(2.0));

    // three points, mean 1: 1 + 0 + 1 = 2
    auto tri3 = compute_ssr_triangle(make({0.0, 1.0, 2.0}), 1);
    CHECK(tri3.ssr(1, 3) == doctest::Approx(2.0));
}

TEST_CASE("triangle: admissibility and bounds") {
    auto tri = compute_ssr_triangle(make({1, 2, 3, 4, 5, 6, 7, 8}), 3);
    CHECK(tri.t_len() == 8);
    CHECK(tri.min_len() == 3);
    CHECK(tri.admissible(1, 3));
    CHECK(!tri.admissible(1, 2));
    CHECK(!tri.admissible(0, 4));
    CHECK(!tri.admissible(7, 9));
    CHECK_THROWS_AS((void)tri.ssr(1, 2), shipbreak::InvalidBreaks);
    CHECK_THROWS_AS((void)tri.ssr(6, 9), shipbreak::InvalidBreaks);
}

TEST_CASE("triangle: rejects series shorter than two segments") {
    CHECK_THROWS_AS(compute_ssr_triangle(make({1, 2, 3}), 2), shipbreak::SeriesTooShort);
    CHECK_NOTHROW(compute_ssr_triangle(make({1, 2, 3, 4}), 2));
}

TEST_CASE("triangle: agrees with two-pass oracle on random series") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        oracle::Rng rng(seed);
        int t_len = 5 + static_cast<int>(rng.next_u64() % 40);
        std::vector<double> v(t_len);
        for (auto& x : v) x = 10.0 * rng.normal();
        auto tri = compute_ssr_triangle(make(v), 2);
        for (int i = 1; i <= t_len; ++i) {
            for (int j = i + 1; j <= t_len; ++j) {
                double want = oracle::segment_ssr(v, i - 1, j - 1);
                CHECK(tri.ssr(i, j) == doctest::Approx(want).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("triangle: rows are monotone and non-negative") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        oracle::Rng rng(seed);
        int t_len = 6 + static_cast<int>(rng.next_u64() % 55);
        std::vector<double> v(t_len);
        for (auto& x : v) x = rng.normal();
        auto tri = compute_ssr_triangle(make(v), 3);
        for (int i = 1; i + 2 <= t_len; ++i) {
            double prev = -1.0;
            for (int j = i + 2; j <= t_len; ++j) {
                double s = tri.ssr(i, j);
                CHECK(s >= 0.0);
                CHECK(s >= prev);
                prev = s;
            }
        }
    }
}

TEST_CASE("triangle: general regressors reproduce direct least squares") {
    // y_t = b0 + b1*t + noise; q = 2 with z_t = (1, t)
    oracle::Rng rng(7);
    const int t_len = 24;
    std::vector<double> v(t_len), z;
    for (int t = 1; t <= t_len; ++t) {
        v[t - 1] = 0.5 + 0.3 * t + 0.4 * rng.normal();
        z.push_back(1.0);
        z.push_back(static_cast<double>(t));
    }
    TimeSeries s;
    s.id = "trend";
    for (int t = 0; t < t_len; ++t) s.periods.push_back(1980 + t);
    s.values = v;
    s.regressors = z;
    s.regressor_dim = 2;

    auto tri = compute_ssr_triangle(s, 3);
    // direct normal-equation OLS per segment
    for (int i = 1; i <= t_len - 2; ++i) {
        for (int j = i + 2; j <= t_len; ++j) {
            double s11 = 0, s1t = 0, stt = 0, s1y = 0, sty = 0, syy = 0;
            for (int t = i; t <= j; ++t) {
                double zt = t, yt = v[t - 1];
                s11 += 1; s1t += zt; stt += zt * zt;
                s1y += yt; sty += zt * yt; syy += yt * yt;
            }
            double det = s11 * stt - s1t * s1t;
            double b0 = (stt * s1y - s1t * sty) / det;
            double b1 = (s11 * sty - s1t * s1y) / det;
            double want = syy - b0 * s1y - b1 * sty;
            CHECK(tri.ssr(i, j) == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("triangle: singular segment is reported") {
    // two proportional regressor columns
    TimeSeries s;
    s.id = "collinear";
    for (int t = 0; t < 10; ++t) {
        s.periods.push_back(2000 + t);
        s.values.push_back(static_cast<double>(t));
        s.regressors.push_back(1.0);
        s.regressors.push_back(2.0);
    }
    s.regressor_dim = 2;
    CHECK_THROWS_AS(compute_ssr_triangle(s, 3), shipbreak::SingularSegment);
}

TEST_CASE("series: invariant validation") {
    TimeSeries s = make({1, 2, 3});
    CHECK_NOTHROW(s.validate());

    TimeSeries gap = s;
    gap.periods = {1970, 1971, 1973};
    CHECK_THROWS_AS(gap.validate(), shipbreak::InvalidSeries);

    TimeSeries nonfinite = s;
    nonfinite.values[1] = std::nan("");
    CHECK_THROWS_AS(nonfinite.validate(), shipbreak::InvalidSeries);

    TimeSeries shape = s;
    shape.regressors = {1.0, 1.0};
    shape.regressor_dim = 1;
    CHECK_THROWS_AS(shape.validate(), shipbreak::InvalidSeries);

    auto w = s.window(1971, 1972);
    CHECK(w.length() == 2);
    CHECK(w.periods.front() == 1971);
    CHECK(w.values.front() == 2.0);
}
