#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "shipbreak/selection.hpp"
#include "support/oracles.hpp"

using namespace shipbreak;

namespace {
TimeSeries make(std::vector<double> v) {
    return TimeSeries::from_start("s", 1970, std::move(v));
}
} // namespace

TEST_CASE("bic: closed-form evaluation") {
    // T=10, SSR=10, q=1, m=0:
    //   10*(ln(2*pi*10/10)+1) + 2*ln(10) = 32.983940850081545
    CHECK(bic(10.0, 10, 0, 1) == doctest::Approx(32.983940850081545).epsilon(1e-12));

    // parameter count p = (m+1)*q + m + 1
    double t = 25, ssr = 7.5;
    for (int q = 1; q <= 3; ++q) {
        for (int m = 0; m <= 3; ++m) {
            double p = (m + 1) * q + m + 1;
            double want = t * (std::log(2.0 * M_PI * ssr / t) + 1.0) + p * std::log(t);
            CHECK(bic(ssr, 25, m, q) == doctest::Approx(want).epsilon(1e-12));
        }
    }

    // perfect fit: sentinel minimal score
    CHECK(bic(0.0, 10, 1, 1) == -std::numeric_limits<double>::infinity());
    CHECK(bic(-1e-18, 10, 1, 1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("select_breaks: clean two-break design") {
    std::vector<double> v;
    for (int t = 0; t < 20; ++t) v.push_back(0.0 + 0.01 * ((t * 7) % 3));
    for (int t = 0; t < 20; ++t) v.push_back(5.0 + 0.01 * ((t * 5) % 3));
    for (int t = 0; t < 20; ++t) v.push_back(10.0 + 0.01 * ((t * 3) % 3));

    auto r = select_breaks(make(v), 4, 6);
    CHECK(r.table.chosen_m == 2);
    CHECK(r.best.breaks.indices == std::vector<int>{20, 40});
    REQUIRE(r.table.rows.size() == 5);
    for (int m = 0; m <= 4; ++m) {
        CHECK(r.table.rows[m].m == m);
        CHECK(r.table.rows[m].feasible);
    }
    // segments fitted for the chosen model
    REQUIRE(r.best.segments.size() == 3);
    CHECK(r.best.segments[1].first == 21);
    CHECK(r.best.segments[1].last == 40);
}

TEST_CASE("select_breaks: infeasible rows flagged, not dropped") {
    auto r = select_breaks(make({0, 0, 0, 1, 1, 1, 5, 5, 5, 9}), 6, 3);
    REQUIRE(r.table.rows.size() == 7);
    // T=10, min_len=3: m feasible iff (m+1)*3 <= 10, i.e. m <= 2
    for (int m = 0; m <= 6; ++m) {
        CHECK(r.table.rows[m].feasible == (m <= 2));
        if (m > 2) {
            CHECK(std::isnan(r.table.rows[m].bic));
            CHECK(r.table.rows[m].breaks.indices.empty());
        }
    }
    CHECK(r.table.chosen_m <= 2);
}

TEST_CASE("select_breaks: degenerate zero-SSR fit is flagged and wins") {
    auto r = select_breaks(make({1, 1, 1, 1, 2, 2, 2, 2}), 2, 2);
    // m=1 with break at 4 fits exactly; smaller degenerate m preferred
    CHECK(r.table.chosen_m == 1);
    CHECK(r.table.rows[1].degenerate);
    CHECK(r.table.rows[1].bic == -std::numeric_limits<double>::infinity());
    CHECK(!r.table.rows[0].degenerate);
    CHECK(r.best.breaks.indices == std::vector<int>{4});
}

TEST_CASE("select_breaks: ties prefer smaller m") {
    // a series where adding breaks cannot reduce SSR below the m=0 fit
    auto r = select_breaks(make({3, 3, 3, 3, 3, 3, 3, 3}), 3, 2);
    CHECK(r.table.chosen_m == 0); // all m degenerate at SSR 0; parsimony wins
    CHECK(r.table.rows[0].degenerate);
}

TEST_CASE("select_breaks: errors") {
    CHECK_THROWS_AS(select_breaks(make({1, 2, 3}), 2, 2), SeriesTooShort);
}

TEST_CASE("select_breaks: noisy three-regime recovery, single draw") {
    oracle::Rng rng(4243);
    std::vector<double> v;
    const double means[3] = {0.0, 5.0, 10.0};
    for (int r = 0; r < 3; ++r)
        for (int t = 0; t < 20; ++t) v.push_back(means[r] + 0.1 * rng.normal());
    auto res = select_breaks(make(v), 4, 6);
    CHECK(res.table.chosen_m == 2);
    CHECK(res.best.breaks.indices == std::vector<int>{20, 40});
    // the two-break row must locate the planted breaks whatever BIC prefers
    REQUIRE(res.table.rows.size() >= 3);
    CHECK(res.table.rows[2].m == 2);
    CHECK(res.table.rows[2].breaks.indices == std::vector<int>{20, 40});
}

TEST_CASE("selection table: BIC recomputable from SSR column") {
    oracle::Rng rng(77);
    std::vector<double> v;
    for (int t = 0; t < 36; ++t)
        v.push_back((t < 18 ? 0.0 : 3.0) + rng.normal());
    auto r = select_breaks(make(v), 4, 4);
    for (const auto& row : r.table.rows) {
        if (!row.feasible || row.degenerate) continue;
        double p = (row.m + 1) * 1 + row.m + 1;
        double want = 36.0 * (std::log(2.0 * M_PI * row.total_ssr / 36.0) + 1.0) +
                      p * std::log(36.0);
        CHECK(row.bic == doctest::Approx(want).epsilon(1e-12));
    }
}
