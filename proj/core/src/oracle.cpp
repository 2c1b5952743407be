#include "ofdma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ofdma/waterfill.hpp"

namespace ofdma::oracle {

OracleResult exhaustive_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                              bool restrict_candidates, std::int64_t guard) {
    cfg.validate();
    const int n = cfg.subcarriers;
    const int dc = cfg.dc_users;

    // Candidate pool per subcarrier.
    std::vector<std::vector<int>> pool(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        auto& cands = pool[static_cast<std::size_t>(c)];
        for (int k = 0; k < dc; ++k) cands.push_back(k);
        if (restrict_candidates) {
            if (cfg.ndc_users() > 0) {
                int best = dc;
                for (int k = dc + 1; k < cfg.users; ++k)
                    if (alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) >
                        alpha(static_cast<std::size_t>(best), static_cast<std::size_t>(c)))
                        best = k;
                cands.push_back(best);
            }
        } else {
            for (int k = dc; k < cfg.users; ++k) cands.push_back(k);
        }
    }

    double combos = 1.0;
    for (const auto& cands : pool) combos *= static_cast<double>(cands.size());
    if (combos > static_cast<double>(guard))
        throw std::invalid_argument("exhaustive_solve: " + std::to_string(combos) +
                                    " assignments exceed the guard rail of " +
                                    std::to_string(guard));

    OracleResult out;
    out.best_assignment.assign(static_cast<std::size_t>(n), -1);

    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    std::vector<double> scratch;
    scratch.reserve(static_cast<std::size_t>(n));

    bool done = false;
    while (!done) {
        ++out.enumerated;
        for (int c = 0; c < n; ++c)
            assignment[static_cast<std::size_t>(c)] =
                pool[static_cast<std::size_t>(c)][static_cast<std::size_t>(
                    digits[static_cast<std::size_t>(c)])];

        // Feasibility and NDC sum-rate with the shared water-filling kernels.
        double dc_total = 0.0;
        bool ok = true;
        for (int k = 0; k < dc && ok; ++k) {
            scratch.clear();
            for (int c = 0; c < n; ++c)
                if (assignment[static_cast<std::size_t>(c)] == k)
                    scratch.push_back(
                        alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
            if (scratch.empty()) {
                ok = false;
                break;
            }
            std::sort(scratch.begin(), scratch.end(), std::greater<>());
            const auto lv =
                waterfill::dc_level_sorted(scratch, cfg.dc_rates[static_cast<std::size_t>(k)]);
            for (int i = 0; i < lv.active; ++i)
                dc_total += lv.level - 1.0 / scratch[static_cast<std::size_t>(i)];
            if (dc_total > cfg.total_power) ok = false;
        }

        if (ok) {
            double rate = 0.0;
            scratch.clear();
            for (int c = 0; c < n; ++c) {
                const int k = assignment[static_cast<std::size_t>(c)];
                if (k >= dc)
                    scratch.push_back(
                        alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
            }
            if (!scratch.empty()) {
                std::sort(scratch.begin(), scratch.end(), std::greater<>());
                const auto lv =
                    waterfill::ndc_level_sorted(scratch, cfg.total_power - dc_total);
                for (int i = 0; i < lv.active; ++i)
                    rate += std::log2(lv.level * scratch[static_cast<std::size_t>(i)]);
            }
            if (!out.feasible || rate > out.best_ndc_sum_rate) {
                out.feasible = true;
                out.best_ndc_sum_rate = rate;
                out.best_assignment = assignment;
            }
        }

        // mixed-radix increment
        done = true;
        for (int c = 0; c < n; ++c) {
            auto& d = digits[static_cast<std::size_t>(c)];
            if (++d < static_cast<int>(pool[static_cast<std::size_t>(c)].size())) {
                done = false;
                break;
            }
            d = 0;
        }
    }
    return out;
}

Allocation recover(const SystemConfig& cfg, const Matrix<double>& alpha,
                   const OracleResult& result) {
    if (!result.feasible)
        throw std::invalid_argument("oracle::recover: result is infeasible");
    Allocation out = waterfill::allocate_given_assignment(
        cfg, alpha, SharingMatrix::exclusive(result.best_assignment, cfg.users));
    out.report.solver = SolverId::oracle;
    return out;
}

}  // namespace ofdma::oracle
