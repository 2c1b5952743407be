#include <cmath>
#include <vector>

#include "doctest.h"
#include "ofdma/greedy.hpp"
#include "ofdma/optimal_ts.hpp"
#include "ofdma/oracle.hpp"
#include "ofdma/rng.hpp"
#include "test_util.hpp"

using namespace ofdma;
using namespace ofdma::greedy;

TEST_CASE("one strong subcarrier satisfies the target") {
    const auto cfg = testutil::make_cfg(2, 1, 2, 2.0, {std::log2(10.0)});
    Matrix<double> alpha(2, 2);
    alpha(0, 0) = 9.0;
    alpha(0, 1) = 1.0;
    alpha(1, 0) = 1.0;
    alpha(1, 1) = 1.0;
    const auto st = greedy_dc_assign(cfg, alpha);
    REQUIRE(st.dc_sets[0].size() == 1);
    CHECK(st.dc_sets[0][0] == 0);
    REQUIRE(st.available.size() == 1);
    CHECK(st.available[0] == 1);
    CHECK(st.iterations == 1);
    CHECK(st.provisional_rates[0] == doctest::Approx(std::log2(10.0)).epsilon(1e-12));
}

TEST_CASE("mirrored users each grab their strong subcarrier") {
    const auto cfg = testutil::make_cfg(4, 2, 4, 4.0, {2.0, 2.0});
    Matrix<double> alpha(4, 4, 1.0);
    alpha(0, 0) = 4.0;
    alpha(1, 1) = 4.0;
    const auto st = greedy_dc_assign(cfg, alpha);
    REQUIRE(st.dc_sets[0].size() == 1);
    REQUIRE(st.dc_sets[1].size() == 1);
    CHECK(st.dc_sets[0][0] == 0);
    CHECK(st.dc_sets[1][0] == 1);
    CHECK(st.available == std::vector<int>{2, 3});

    const auto alloc = refine_and_handover(cfg, alpha, st);
    CHECK(alloc.report.outage == false);
    CHECK(alloc.power.dc_levels[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alloc.power.dc_levels[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(alloc.power.actual_power(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(alloc.power.actual_power(1, 1) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(alloc.power.dc_power_total == doctest::Approx(1.5).epsilon(1e-12));
    // residual 2.5 spreads over subcarriers 2 and 3
    double ndc_power = 0.0;
    for (int k = 2; k < 4; ++k)
        for (int c = 0; c < 4; ++c)
            ndc_power += alloc.power.actual_power(static_cast<std::size_t>(k),
                                                  static_cast<std::size_t>(c));
    CHECK(ndc_power == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("no DC users leaves everything available") {
    rng::Stream st(10);
    const auto cfg = testutil::make_cfg(3, 0, 6, 8.0, {});
    const auto alpha = testutil::random_alpha(3, 6, st);
    const auto state = greedy_dc_assign(cfg, alpha);
    CHECK(state.available.size() == 6);
    CHECK(state.iterations == 0);

    // with no DC load both greedy and the optimal solver reduce to best-CNR
    // water-filling, so their outputs coincide
    const auto g = refine_and_handover(cfg, alpha, state);
    const auto o = ts::outer_solve(cfg, alpha);
    CHECK(g.report.ndc_sum_rate == doctest::Approx(o.report.ndc_sum_rate).epsilon(1e-9));
    CHECK(g.power.ndc_level == doctest::Approx(o.power.ndc_level).epsilon(1e-9));
}

TEST_CASE("over-allocated subcarriers are handed back") {
    const auto cfg = testutil::make_cfg(2, 1, 2, 4.0, {2.0});
    Matrix<double> alpha(2, 2);
    alpha(0, 0) = 4.0;
    alpha(0, 1) = 1.0;
    alpha(1, 0) = 0.5;
    alpha(1, 1) = 0.5;
    GreedyState st;
    st.dc_sets = {{0, 1}};  // both granted, refinement keeps only the strong one
    st.available = {};
    st.provisional_rates = {2.0};
    const auto alloc = refine_and_handover(cfg, alpha, st);
    CHECK(alloc.report.outage == false);
    CHECK(alloc.rho.rho(0, 0) == 1.0);
    CHECK(alloc.rho.rho(0, 1) == 0.0);
    CHECK(alloc.rho.rho(1, 1) == 1.0);  // returned and handed to the NDC user
    CHECK(alloc.report.rates[0] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("outage when the refined demand exceeds the budget") {
    const auto cfg = testutil::make_cfg(2, 1, 2, 1.0, {12.0});
    Matrix<double> alpha(2, 2, 0.05);
    const auto alloc = solve(cfg, alpha);
    CHECK(alloc.report.outage == true);
    CHECK(alloc.report.ndc_sum_rate == 0.0);
}

TEST_CASE("iteration count never exceeds the subcarrier count") {
    rng::Stream st(20202);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(st.next_u64() % 15);
        const int dc = 1 + static_cast<int>(st.next_u64() % 3);
        std::vector<double> rates(static_cast<std::size_t>(dc));
        for (double& r : rates) r = 1.0 + 20.0 * st.next_unit();
        const auto cfg = testutil::make_cfg(dc + 2, dc, n, 30.0, std::move(rates));
        const auto alpha = testutil::random_alpha(dc + 2, n, st);
        const auto state = greedy_dc_assign(cfg, alpha);
        CHECK(state.iterations <= n);
    }
}

TEST_CASE("DC rates are met exactly whenever the heuristic is feasible") {
    rng::Stream st(950);
    int feasible = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const auto cfg = testutil::make_cfg(4, 2, 8, 30.0, {3.0, 2.0});
        const auto alpha = testutil::random_alpha(4, 8, st);
        const auto alloc = solve(cfg, alpha);
        if (alloc.report.outage) continue;
        ++feasible;
        CHECK(alloc.report.rates[0] == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(alloc.report.rates[1] == doctest::Approx(2.0).epsilon(1e-6));
        double total = 0.0;
        for (double s : alloc.power.actual_power.data()) total += s;
        CHECK(total == doctest::Approx(cfg.total_power).epsilon(1e-6));
    }
    CHECK(feasible >= 40);
}

TEST_CASE("greedy never beats the exhaustive optimum") {
    rng::Stream st(31415);
    int feasible = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto cfg = testutil::make_cfg(3, 1, 6, 18.0, {3.0});
        const auto alpha = testutil::random_alpha(3, 6, st);
        const auto best = oracle::exhaustive_solve(cfg, alpha);
        const auto alloc = solve(cfg, alpha);
        if (!best.feasible || alloc.report.outage) continue;
        ++feasible;
        CHECK(alloc.report.ndc_sum_rate <= best.best_ndc_sum_rate + 1e-9);
    }
    CHECK(feasible >= 12);
}

TEST_CASE("greedy loss shrinks with the DC load") {
    // The heuristic keeps one whole subcarrier per DC user even for tiny
    // targets, so its loss floor is the locked-band fraction; at desk scale
    // (64 subcarriers, 4 DC users) small targets must land within ~10% of
    // the optimum and clearly closer than a heavy load.
    rng::Stream st(60606);
    const auto alpha = testutil::random_alpha(8, 64, st);
    auto loss_at = [&](double rdc) {
        const auto cfg = testutil::make_cfg(8, 4, 64, 100.0,
                                            std::vector<double>(4, rdc / 4.0));
        const auto g = solve(cfg, alpha);
        const auto o = ts::outer_solve(cfg, alpha);
        REQUIRE(g.report.outage == false);
        REQUIRE(o.report.outage == false);
        return (o.report.ndc_sum_rate - g.report.ndc_sum_rate) / o.report.ndc_sum_rate;
    };
    const double small = loss_at(0.04);
    const double large = loss_at(160.0);
    CHECK(small >= -1e-9);
    CHECK(small <= 0.10);
    CHECK(large >= -1e-9);
    CHECK(large <= 0.12);
}
