#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "ofdma/baselines.hpp"
#include "ofdma/channel.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/waterfill.hpp"
#include "test_util.hpp"

using namespace ofdma;
using namespace ofdma::baselines;

TEST_CASE("equal comb at the reference size") {
    const auto p = fsa_pattern(8, 64);
    for (int c = 0; c < 64; ++c) CHECK(p.assignment[static_cast<std::size_t>(c)] == c % 8);
    for (int k = 0; k < 8; ++k) CHECK(p.counts[static_cast<std::size_t>(k)] == 8);
}

TEST_CASE("equal comb degenerate shapes") {
    const auto one = fsa_pattern(1, 4);
    CHECK(one.assignment == std::vector<int>{0, 0, 0, 0});
    const auto two = fsa_pattern(2, 4);
    CHECK(two.assignment == std::vector<int>{0, 1, 0, 1});
    CHECK_THROWS_AS(fsa_pattern(3, 4), std::invalid_argument);
}

TEST_CASE("priority comb counts at the reference size") {
    const auto cfg = testutil::make_cfg(8, 4, 64, 1.0, {1.0, 1.0, 1.0, 1.0});
    const auto p = fsap_pattern(cfg);
    const std::vector<int> expected{12, 12, 12, 12, 4, 4, 4, 4};
    CHECK(p.counts == expected);
}

TEST_CASE("priority comb without DC users reduces to the equal comb") {
    const auto cfg = testutil::make_cfg(4, 0, 16, 1.0, {});
    CHECK(fsap_pattern(cfg).assignment == fsa_pattern(4, 16).assignment);
}

TEST_CASE("priority comb rejects incompatible sizes") {
    const auto cfg = testutil::make_cfg(8, 4, 60, 1.0, {1.0, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(fsap_pattern(cfg), std::invalid_argument);
}

TEST_CASE("comb gaps never exceed the cycle length") {
    const auto cfg = testutil::make_cfg(8, 4, 64, 1.0, {1.0, 1.0, 1.0, 1.0});
    const auto p = fsap_pattern(cfg);
    const int cycle = 16;
    for (int k = 0; k < 8; ++k) {
        int prev = -1;
        for (int c = 0; c < 64; ++c) {
            if (p.assignment[static_cast<std::size_t>(c)] != k) continue;
            if (prev >= 0) CHECK(c - prev <= cycle);
            prev = c;
        }
        CHECK(prev >= 0);
    }
}

TEST_CASE("patterns are deterministic") {
    const auto cfg = testutil::make_cfg(8, 4, 64, 1.0, {1.0, 1.0, 1.0, 1.0});
    CHECK(fsap_pattern(cfg).assignment == fsap_pattern(cfg).assignment);
    CHECK(fsa_pattern(8, 64).assignment == fsa_pattern(8, 64).assignment);
}

TEST_CASE("single-owner pattern reduces to one water level") {
    rng::Stream st(88);
    const auto cfg = testutil::make_cfg(2, 0, 8, 6.0, {});
    const auto alpha = testutil::random_alpha(2, 8, st);
    CombPattern p;
    p.assignment.assign(8, 1);
    p.counts = {0, 8};
    const auto alloc = allocate_fixed(cfg, alpha, p);
    const auto wl = waterfill::ndc_water_level(alpha.row(1), 6.0);
    CHECK(alloc.report.ndc_sum_rate > 0.0);
    CHECK(alloc.power.ndc_level == doctest::Approx(wl.level).epsilon(1e-12));
}

TEST_CASE("priority comb supports higher DC loads than the equal comb") {
    // max feasible total DC rate on a fixed realization, coarse scan
    const auto real = channel::draw_realization(channel::hiperlan2_model_a(), 8, 64, 321);
    const std::vector<double> gap{6.6};
    const auto cnr = channel::to_cnr(real, gap, 20.0);

    auto max_rdc = [&](bool priority) {
        double best = 0.0;
        for (double rdc = 8.0; rdc <= 240.0; rdc += 8.0) {
            auto cfg = testutil::make_cfg(8, 4, 64, cnr.total_power,
                                          std::vector<double>(4, rdc / 4.0));
            const auto pattern = priority ? fsap_pattern(cfg) : fsa_pattern(8, 64);
            if (!allocate_fixed(cfg, cnr.cnr.alpha, pattern).report.outage) best = rdc;
        }
        return best;
    };
    CHECK(max_rdc(true) >= max_rdc(false));
}

TEST_CASE("collapsing the NDC slots onto one user") {
    const auto cfg = testutil::make_cfg(8, 4, 64, 1.0, {1.0, 1.0, 1.0, 1.0});
    const auto base = fsap_pattern(cfg);
    const auto collapsed = collapse_ndc(base, 4, 6);
    int owned = 0;
    for (std::size_t c = 0; c < 64; ++c) {
        const int owner = collapsed.assignment[c];
        CHECK(owner <= 6);
        if (base.assignment[c] >= 4) {
            CHECK(owner == 6);
            ++owned;
        } else {
            CHECK(owner == base.assignment[c]);
        }
    }
    CHECK(owned == 16);
    CHECK_THROWS_AS(collapse_ndc(base, 4, 2), std::invalid_argument);
}
