#include "ofdma/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ofdma/waterfill.hpp"

namespace ofdma::greedy {

GreedyState greedy_dc_assign(const SystemConfig& cfg, const Matrix<double>& alpha) {
    cfg.validate();
    const int dc = cfg.dc_users;
    const int n = cfg.subcarriers;

    GreedyState st;
    st.dc_sets.assign(static_cast<std::size_t>(dc), {});
    st.provisional_rates.assign(static_cast<std::size_t>(dc), 0.0);
    st.available.resize(static_cast<std::size_t>(n));
    std::iota(st.available.begin(), st.available.end(), 0);

    const double equal_power = cfg.total_power / static_cast<double>(n);
    while (!st.available.empty()) {
        // most-deficient DC user; ties to the lowest index
        int kstar = -1;
        double worst = 0.0;
        for (int k = 0; k < dc; ++k) {
            const double deficit = cfg.dc_rates[static_cast<std::size_t>(k)] -
                                   st.provisional_rates[static_cast<std::size_t>(k)];
            if (deficit > 0.0 && deficit > worst) {
                worst = deficit;
                kstar = k;
            }
        }
        if (kstar < 0) break;
        ++st.iterations;

        // best available subcarrier; ties to the lowest index
        std::size_t pick = 0;
        for (std::size_t i = 1; i < st.available.size(); ++i) {
            const double a = alpha(static_cast<std::size_t>(kstar),
                                   static_cast<std::size_t>(st.available[i]));
            const double b = alpha(static_cast<std::size_t>(kstar),
                                   static_cast<std::size_t>(st.available[pick]));
            if (a > b) pick = i;
        }
        const int sub = st.available[pick];
        st.available.erase(st.available.begin() + static_cast<std::ptrdiff_t>(pick));
        st.dc_sets[static_cast<std::size_t>(kstar)].push_back(sub);
        st.provisional_rates[static_cast<std::size_t>(kstar)] +=
            std::log2(1.0 + alpha(static_cast<std::size_t>(kstar), static_cast<std::size_t>(sub)) *
                                equal_power);
    }
    return st;
}

Allocation refine_and_handover(const SystemConfig& cfg, const Matrix<double>& alpha,
                               const GreedyState& state) {
    const std::size_t users = static_cast<std::size_t>(cfg.users);
    const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);
    const int dc = cfg.dc_users;

    Allocation out;
    out.rho.rho = Matrix<double>(users, n, 0.0);
    out.power.actual_power = Matrix<double>(users, n, 0.0);
    out.power.conditional_power = Matrix<double>(users, n, 0.0);
    out.power.dc_levels.assign(static_cast<std::size_t>(dc), 0.0);
    out.report.rates.assign(users, 0.0);
    out.report.solver = SolverId::greedy;
    out.report.iterations.inner = state.iterations;

    std::vector<int> residual = state.available;
    bool outage = false;
    double dc_total = 0.0;

    for (int k = 0; k < dc; ++k) {
        const auto& set = state.dc_sets[static_cast<std::size_t>(k)];
        if (set.empty()) {
            outage = true;  // an unserved target can never be met
            continue;
        }
        std::vector<double> cnrs(set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            cnrs[i] = alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(set[i]));
        const auto wl = waterfill::dc_water_level(cnrs, cfg.dc_rates[static_cast<std::size_t>(k)]);
        out.power.dc_levels[static_cast<std::size_t>(k)] = wl.level;

        double rate = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            const std::size_t col = static_cast<std::size_t>(set[i]);
            if (wl.powers[i] > 0.0) {
                out.rho.rho(static_cast<std::size_t>(k), col) = 1.0;
                out.power.conditional_power(static_cast<std::size_t>(k), col) = wl.powers[i];
                out.power.actual_power(static_cast<std::size_t>(k), col) = wl.powers[i];
                dc_total += wl.powers[i];
                rate += std::log2(1.0 + wl.powers[i] * cnrs[i]);
            } else {
                residual.push_back(set[i]);  // over-allocated; hand back
            }
        }
        out.report.rates[static_cast<std::size_t>(k)] = rate;
    }
    std::sort(residual.begin(), residual.end());

    out.power.dc_power_total = dc_total;
    outage = outage || dc_total > cfg.total_power;
    out.report.outage = outage;

    if (!outage && !residual.empty() && cfg.ndc_users() > 0) {
        std::vector<int> owner(residual.size());
        std::vector<double> cnrs(residual.size());
        for (std::size_t i = 0; i < residual.size(); ++i) {
            const std::size_t col = static_cast<std::size_t>(residual[i]);
            int best = dc;
            for (int k = dc + 1; k < cfg.users; ++k)
                if (alpha(static_cast<std::size_t>(k), col) >
                    alpha(static_cast<std::size_t>(best), col))
                    best = k;
            owner[i] = best;
            cnrs[i] = alpha(static_cast<std::size_t>(best), col);
        }
        const auto wl = waterfill::ndc_water_level(cnrs, cfg.total_power - dc_total);
        out.power.ndc_level = wl.level;
        for (std::size_t i = 0; i < residual.size(); ++i) {
            const std::size_t col = static_cast<std::size_t>(residual[i]);
            const std::size_t k = static_cast<std::size_t>(owner[i]);
            out.rho.rho(k, col) = 1.0;
            out.power.conditional_power(k, col) = wl.powers[i];
            out.power.actual_power(k, col) = wl.powers[i];
            if (wl.powers[i] > 0.0) {
                const double r = std::log2(1.0 + wl.powers[i] * cnrs[i]);
                out.report.rates[k] += r;
                out.report.ndc_sum_rate += r;
            }
        }
    }

    // Columns nobody ended up holding stay with their best NDC user at zero
    // power so the sharing matrix remains a valid column-stochastic map.
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (std::size_t k = 0; k < users; ++k) sum += out.rho.rho(k, c);
        if (sum == 0.0) {
            int best = dc < cfg.users ? dc : 0;
            for (int k = dc + 1; k < cfg.users; ++k)
                if (alpha(static_cast<std::size_t>(k), c) >
                    alpha(static_cast<std::size_t>(best), c))
                    best = k;
            out.rho.rho(static_cast<std::size_t>(best), c) = 1.0;
        }
    }
    return out;
}

Allocation solve(const SystemConfig& cfg, const Matrix<double>& alpha) {
    return refine_and_handover(cfg, alpha, greedy_dc_assign(cfg, alpha));
}

}  // namespace ofdma::greedy
