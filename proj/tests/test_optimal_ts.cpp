#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ofdma/optimal_ts.hpp"
#include "ofdma/oracle.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/waterfill.hpp"
#include "test_util.hpp"

using namespace ofdma;
using namespace ofdma::ts;

TEST_CASE("occupancy score clamps below the entry level") {
    CHECK(occupancy_score(1.0, 1.0, 1.0) == 0.0);
    CHECK(occupancy_score(0.5, 1.5, 1.0) == 0.0);
}

TEST_CASE("occupancy score reference values") {
    const double ref = 1.0 - 0.5 / std::numbers::ln2;  // ~0.27865
    CHECK(occupancy_score(2.0, 1.0, 1.0) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(occupancy_score(1.0, 2.0, 1.0) == doctest::Approx(2.0 * ref).epsilon(1e-12));
}

TEST_CASE("occupancy score is monotone in CNR and level") {
    double prev = 0.0;
    for (double a = 1.1; a < 50.0; a *= 1.3) {
        const double s = occupancy_score(a, 1.0, 1.0);
        CHECK(s > prev);
        prev = s;
    }
    prev = 0.0;
    for (double lvl = 0.6; lvl < 40.0; lvl *= 1.3) {
        const double s = occupancy_score(2.0, lvl, 1.0);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("score assignment follows the best CNR when no DC users exist") {
    rng::Stream st(5);
    const auto alpha = testutil::random_alpha(3, 8, st);
    const auto rho = assign_by_score(alpha, 0, {}, 0.8);
    for (int c = 0; c < 8; ++c) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) >
                alpha(static_cast<std::size_t>(best), static_cast<std::size_t>(c)))
                best = k;
        CHECK(rho.rho(static_cast<std::size_t>(best), static_cast<std::size_t>(c)) == 1.0);
    }
}

TEST_CASE("all-zero column falls to the best NDC user") {
    Matrix<double> alpha(2, 1);
    alpha(0, 0) = 0.5;  // DC
    alpha(1, 0) = 0.9;  // NDC
    const std::vector<double> dc_levels{1.0};
    const auto rho = assign_by_score(alpha, 1, dc_levels, 1.0);
    CHECK(rho.rho(1, 0) == 1.0);
}

TEST_CASE("score competition decides the column") {
    Matrix<double> alpha(2, 1);
    alpha(0, 0) = 1.0;  // DC at level 2
    alpha(1, 0) = 2.0;  // NDC at level 1
    const std::vector<double> dc_levels{2.0};
    const auto rho = assign_by_score(alpha, 1, dc_levels, 1.0);
    CHECK(rho.rho(0, 0) == 1.0);  // 0.5573 beats 0.2787
}

TEST_CASE("inner solve on a single subcarrier") {
    const auto cfg = testutil::make_cfg(2, 1, 1, 1.0, {1.0});
    Matrix<double> alpha(2, 1);
    alpha(0, 0) = 1.0;
    alpha(1, 0) = 0.05;
    const auto st = inner_solve(cfg, alpha, 0.5);
    CHECK(st.dc_levels[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(st.rho.rho(0, 0) == 1.0);
    CHECK(st.dc_rates[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("inner solve claims only the strong subcarrier") {
    const auto cfg = testutil::make_cfg(2, 1, 2, 4.0, {2.0});
    Matrix<double> alpha(2, 2);
    alpha(0, 0) = 4.0;
    alpha(0, 1) = 1.0;
    alpha(1, 0) = 1e-6;
    alpha(1, 1) = 1e-6;
    const auto st = inner_solve(cfg, alpha, 1e-7);
    CHECK(st.dc_levels[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(st.rho.rho(0, 0) == 1.0);
    CHECK(st.rho.rho(0, 1) < 1e-9);
    CHECK(st.dc_rates[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("consumed power is monotone in the NDC level") {
    rng::Stream st(808);
    const auto cfg = testutil::make_cfg(3, 1, 6, 10.0, {4.0});
    const auto alpha = testutil::random_alpha(3, 6, st);
    double lvl = 0.01;
    double prev = -1.0;
    for (int i = 0; i < 12; ++i) {
        const auto state = inner_solve(cfg, alpha, lvl);
        CHECK(state.consumed_power >= prev - 1e-9 * std::max(1.0, state.consumed_power));
        prev = state.consumed_power;
        lvl *= 2.0;
    }
}

TEST_CASE("bisection update count is pinned by the accuracy") {
    CHECK(bisection_updates(1e-7) == 26);
    CHECK(bisection_updates(1e-9) > bisection_updates(1e-7));
}

TEST_CASE("outer solve performs exactly 26 level updates at 1e-7") {
    rng::Stream st(4242);
    const auto cfg = testutil::make_cfg(4, 2, 8, 50.0, {3.0, 3.0});
    const auto alpha = testutil::random_alpha(4, 8, st);
    const auto alloc = outer_solve(cfg, alpha);
    REQUIRE(alloc.report.outage == false);
    CHECK(alloc.report.iterations.outer == 26);
}

TEST_CASE("outer solve without DC users equals single-user water-filling") {
    rng::Stream st(31337);
    const auto cfg = testutil::make_cfg(3, 0, 8, 12.0, {});
    const auto alpha = testutil::random_alpha(3, 8, st);
    const auto alloc = outer_solve(cfg, alpha);
    REQUIRE(alloc.report.outage == false);

    std::vector<double> best(8);
    for (int c = 0; c < 8; ++c) {
        double b = 0.0;
        for (int k = 0; k < 3; ++k)
            b = std::max(b, alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
        best[static_cast<std::size_t>(c)] = b;
    }
    const auto wl = waterfill::ndc_water_level(best, cfg.total_power);
    double rate = 0.0;
    for (int c = 0; c < 8; ++c)
        rate += std::log2(1.0 + wl.powers[static_cast<std::size_t>(c)] *
                                    best[static_cast<std::size_t>(c)]);
    CHECK(alloc.report.ndc_sum_rate == doctest::Approx(rate).epsilon(1e-9));
}

TEST_CASE("outer solve declares outage on impossible targets") {
    const auto cfg = testutil::make_cfg(2, 1, 2, 1.0, {10.0});
    Matrix<double> alpha(2, 2, 0.01);
    const auto alloc = outer_solve(cfg, alpha);
    CHECK(alloc.report.outage == true);
    CHECK(alloc.report.ndc_sum_rate == 0.0);
}

TEST_CASE("time-sharing bound dominates the exhaustive optimum") {
    rng::Stream st(777);
    int feasible = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto cfg = testutil::make_cfg(3, 1, 5, 20.0, {3.0});
        const auto alpha = testutil::random_alpha(3, 5, st);
        const auto best = oracle::exhaustive_solve(cfg, alpha);
        if (!best.feasible) continue;
        ++feasible;
        const auto alloc = outer_solve(cfg, alpha);
        REQUIRE(alloc.report.outage == false);
        CHECK(alloc.report.ndc_sum_rate >= best.best_ndc_sum_rate - 1e-9);
    }
    CHECK(feasible >= 10);
}

TEST_CASE("solver state matches the exhaustive DC assignment on a small instance") {
    rng::Stream st(90210);
    const auto cfg = testutil::make_cfg(3, 2, 4, 30.0, {2.0, 2.0});
    const auto alpha = testutil::random_alpha(3, 4, st);
    const auto best = oracle::exhaustive_solve(cfg, alpha);
    REQUIRE(best.feasible);
    const auto alloc = outer_solve(cfg, alpha);
    REQUIRE(alloc.report.outage == false);

    // DC rates hit exactly
    for (int k = 0; k < 2; ++k)
        CHECK(alloc.report.rates[static_cast<std::size_t>(k)] ==
              doctest::Approx(2.0).epsilon(1e-6));
    // columns fully owned by a DC user agree with the oracle's optimum
    for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 2; ++k)
            if (alloc.rho.rho(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) >
                1.0 - 1e-9)
                CHECK(best.best_assignment[static_cast<std::size_t>(c)] == k);
}

TEST_CASE("at most one fractional pair per column") {
    rng::Stream st(1111);
    for (int rep = 0; rep < 10; ++rep) {
        const auto cfg = testutil::make_cfg(4, 2, 8, 40.0, {4.0, 3.0});
        const auto alpha = testutil::random_alpha(4, 8, st);
        const auto alloc = outer_solve(cfg, alpha);
        if (alloc.report.outage) continue;
        for (int c = 0; c < 8; ++c) {
            int fractional = 0;
            double sum = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double v =
                    alloc.rho.rho(static_cast<std::size_t>(k), static_cast<std::size_t>(c));
                sum += v;
                if (v > 1e-9 && v < 1.0 - 1e-9) ++fractional;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            CHECK((fractional == 0 || fractional == 2));
        }
    }
}

TEST_CASE("stationarity: levels reproduce the conditional powers") {
    rng::Stream st(555);
    const auto cfg = testutil::make_cfg(4, 2, 8, 30.0, {3.0, 2.0});
    const auto alpha = testutil::random_alpha(4, 8, st);
    const auto alloc = outer_solve(cfg, alpha);
    REQUIRE(alloc.report.outage == false);
    // reconstruct mu and beta from the levels and check the powers they imply
    const double mu = 1.0 / (alloc.power.ndc_level * std::numbers::ln2);
    for (int k = 0; k < 4; ++k) {
        const double level = k < 2 ? alloc.power.dc_levels[static_cast<std::size_t>(k)]
                                   : alloc.power.ndc_level;
        const double beta_k = level * mu * std::numbers::ln2;
        for (int c = 0; c < 8; ++c) {
            const double implied =
                pos(beta_k / (mu * std::numbers::ln2) -
                    1.0 / alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
            CHECK(std::abs(implied - alloc.power.conditional_power(static_cast<std::size_t>(k),
                                                                   static_cast<std::size_t>(c))) <=
                  1e-6 * std::max(1.0, implied));
        }
    }
}

TEST_CASE("inner solve throws past the pass cap") {
    rng::Stream st(31);
    const auto cfg = testutil::make_cfg(3, 2, 6, 10.0, {5.0, 5.0});
    const auto alpha = testutil::random_alpha(3, 6, st);
    SolverSettings settings;
    settings.max_inner = 1;
    CHECK_THROWS_AS(inner_solve(cfg, alpha, 0.01, settings), NonConvergenceError);
}
