#include "ofdma/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ofdma::waterfill {

namespace {

// Strictness margin for the active-set test alpha * L > 1. Keeps the
// reported active count stable when a boundary subcarrier lands on
// alpha * L == 1 up to log/exp round-off; such subcarriers carry zero
// power and zero rate either way.
constexpr double kStrictMargin = 1e-12;

constexpr double kWeightFloor = 1e-12;  // shares below this are treated as unassigned

struct SortScratch {
    std::vector<double> cnrs;
    std::vector<double> weights;
    std::vector<int> order;
};

}  // namespace

DcLevel dc_level_sorted_weighted(std::span<const double> sorted_cnrs,
                                 std::span<const double> weights, double rate_target) {
    if (sorted_cnrs.empty()) throw std::invalid_argument("dc_level: empty CNR set");
    if (!(rate_target > 0.0)) throw std::invalid_argument("dc_level: rate target must be > 0");
    if (weights.size() != sorted_cnrs.size())
        throw std::invalid_argument("dc_level: weights size mismatch");

    const std::size_t m = sorted_cnrs.size();
    // Prefix sums of weights and weighted log-CNRs; the level over a prefix
    // of g subcarriers is exp((R ln2 - sum w ln a) / sum w).
    std::vector<double> wsum(m), lsum(m);
    double ws = 0.0;
    double ls = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        ws += weights[i];
        ls += weights[i] * std::log(sorted_cnrs[i]);
        wsum[i] = ws;
        lsum[i] = ls;
    }

    const double rate_nats = rate_target * std::numbers::ln2;
    for (std::size_t g = m; g >= 1; --g) {
        const std::size_t i = g - 1;
        if (wsum[i] <= 0.0) continue;
        const double level = std::exp((rate_nats - lsum[i]) / wsum[i]);
        if (sorted_cnrs[i] * level > 1.0 + kStrictMargin)
            return {level, static_cast<int>(g)};
    }
    // Unreachable for positive targets: a single subcarrier always satisfies
    // alpha * 2^(R/w) / alpha > 1.
    throw std::logic_error("dc_level: no consistent active set");
}

DcLevel dc_level_sorted(std::span<const double> sorted_cnrs, double rate_target) {
    std::vector<double> ones(sorted_cnrs.size(), 1.0);
    return dc_level_sorted_weighted(sorted_cnrs, ones, rate_target);
}

DcWaterLevel dc_water_level(std::span<const double> cnrs, double rate_target) {
    const std::size_t m = cnrs.size();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return cnrs[static_cast<std::size_t>(a)] >
                                                cnrs[static_cast<std::size_t>(b)]; });
    std::vector<double> sorted(m);
    for (std::size_t i = 0; i < m; ++i) sorted[i] = cnrs[static_cast<std::size_t>(order[i])];

    const DcLevel lv = dc_level_sorted(sorted, rate_target);
    DcWaterLevel out;
    out.level = lv.level;
    out.active = lv.active;
    out.powers.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        out.powers[i] = pos(lv.level - 1.0 / cnrs[i]);
    return out;
}

NdcLevel ndc_level_sorted_weighted(std::span<const double> sorted_cnrs,
                                   std::span<const double> weights, double residual_power) {
    if (residual_power < 0.0)
        throw std::invalid_argument("ndc_level: residual power must be >= 0");
    if (sorted_cnrs.empty()) {
        if (residual_power > 0.0)
            throw std::invalid_argument("ndc_level: no subcarriers to absorb residual power");
        return {0.0, 0};
    }
    if (weights.size() != sorted_cnrs.size())
        throw std::invalid_argument("ndc_level: weights size mismatch");

    const std::size_t m = sorted_cnrs.size();
    double wsum = 0.0;
    double inv_sum = 0.0;  // sum of w / alpha over the candidate prefix
    for (std::size_t g = 1; g <= m; ++g) {
        const std::size_t i = g - 1;
        wsum += weights[i];
        inv_sum += weights[i] / sorted_cnrs[i];
        const double level = (residual_power + inv_sum) / wsum;
        if (g == m || level <= 1.0 / sorted_cnrs[g])
            return {level, static_cast<int>(g)};
    }
    throw std::logic_error("ndc_level: no consistent active set");
}

NdcLevel ndc_level_sorted(std::span<const double> sorted_cnrs, double residual_power) {
    std::vector<double> ones(sorted_cnrs.size(), 1.0);
    return ndc_level_sorted_weighted(sorted_cnrs, ones, residual_power);
}

NdcWaterLevel ndc_water_level(std::span<const double> cnrs, double residual_power) {
    const std::size_t m = cnrs.size();
    std::vector<double> sorted(cnrs.begin(), cnrs.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const NdcLevel lv = ndc_level_sorted(sorted, residual_power);
    NdcWaterLevel out;
    out.level = lv.level;
    out.powers.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) out.powers[i] = pos(lv.level - 1.0 / cnrs[i]);
    return out;
}

Allocation allocate_given_assignment(const SystemConfig& cfg, const Matrix<double>& alpha,
                                     const SharingMatrix& rho) {
    cfg.validate();
    const std::size_t users = static_cast<std::size_t>(cfg.users);
    const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);
    if (alpha.rows() != users || alpha.cols() != n)
        throw std::invalid_argument("allocate_given_assignment: alpha dimensions mismatch");
    if (rho.rho.rows() != users || rho.rho.cols() != n)
        throw std::invalid_argument("allocate_given_assignment: rho dimensions mismatch");
    rho.validate();

    const std::size_t dc = static_cast<std::size_t>(cfg.dc_users);

    Allocation out;
    out.rho = rho;
    out.power.actual_power = Matrix<double>(users, n, 0.0);
    out.power.conditional_power = Matrix<double>(users, n, 0.0);
    out.power.dc_levels.assign(dc, 0.0);
    out.report.rates.assign(users, 0.0);
    out.report.solver = SolverId::fixed_assignment;

    SortScratch scratch;
    bool outage = false;
    double dc_total = 0.0;

    for (std::size_t k = 0; k < dc; ++k) {
        scratch.cnrs.clear();
        scratch.weights.clear();
        for (std::size_t c = 0; c < n; ++c) {
            const double w = rho.rho(k, c);
            if (w > kWeightFloor) {
                scratch.cnrs.push_back(alpha(k, c));
                scratch.weights.push_back(w);
            }
        }
        if (scratch.cnrs.empty()) {
            // A DC user with no subcarriers cannot reach any positive rate.
            outage = true;
            continue;
        }
        scratch.order.resize(scratch.cnrs.size());
        std::iota(scratch.order.begin(), scratch.order.end(), 0);
        std::stable_sort(scratch.order.begin(), scratch.order.end(), [&](int a, int b) {
            return scratch.cnrs[static_cast<std::size_t>(a)] >
                   scratch.cnrs[static_cast<std::size_t>(b)];
        });
        std::vector<double> sorted_cnrs(scratch.cnrs.size());
        std::vector<double> sorted_w(scratch.cnrs.size());
        for (std::size_t i = 0; i < scratch.order.size(); ++i) {
            sorted_cnrs[i] = scratch.cnrs[static_cast<std::size_t>(scratch.order[i])];
            sorted_w[i] = scratch.weights[static_cast<std::size_t>(scratch.order[i])];
        }
        const DcLevel lv = dc_level_sorted_weighted(sorted_cnrs, sorted_w,
                                                    cfg.dc_rates[k]);
        out.power.dc_levels[k] = lv.level;

        double rate = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double p = pos(lv.level - 1.0 / alpha(k, c));
            out.power.conditional_power(k, c) = p;
            const double s = rho.rho(k, c) > kWeightFloor ? rho.rho(k, c) * p : 0.0;
            out.power.actual_power(k, c) = s;
            dc_total += s;
            if (rho.rho(k, c) > kWeightFloor && p > 0.0)
                rate += rho.rho(k, c) * std::log2(1.0 + p * alpha(k, c));
        }
        out.report.rates[k] = rate;
    }

    out.power.dc_power_total = dc_total;
    outage = outage || dc_total > cfg.total_power;
    out.report.outage = outage;

    if (!outage) {
        const double residual = pos(cfg.total_power - dc_total);
        scratch.cnrs.clear();
        scratch.weights.clear();
        std::vector<std::pair<std::size_t, std::size_t>> cells;  // (user, subcarrier)
        for (std::size_t k = dc; k < users; ++k) {
            for (std::size_t c = 0; c < n; ++c) {
                const double w = rho.rho(k, c);
                if (w > kWeightFloor) {
                    scratch.cnrs.push_back(alpha(k, c));
                    scratch.weights.push_back(w);
                    cells.emplace_back(k, c);
                }
            }
        }
        if (!scratch.cnrs.empty()) {
            scratch.order.resize(scratch.cnrs.size());
            std::iota(scratch.order.begin(), scratch.order.end(), 0);
            std::stable_sort(scratch.order.begin(), scratch.order.end(), [&](int a, int b) {
                return scratch.cnrs[static_cast<std::size_t>(a)] >
                       scratch.cnrs[static_cast<std::size_t>(b)];
            });
            std::vector<double> sorted_cnrs(scratch.cnrs.size());
            std::vector<double> sorted_w(scratch.cnrs.size());
            for (std::size_t i = 0; i < scratch.order.size(); ++i) {
                sorted_cnrs[i] = scratch.cnrs[static_cast<std::size_t>(scratch.order[i])];
                sorted_w[i] = scratch.weights[static_cast<std::size_t>(scratch.order[i])];
            }
            const NdcLevel lv = ndc_level_sorted_weighted(sorted_cnrs, sorted_w, residual);
            out.power.ndc_level = lv.level;
            for (std::size_t k = dc; k < users; ++k) {
                double rate = 0.0;
                for (std::size_t c = 0; c < n; ++c) {
                    const double p = pos(lv.level - 1.0 / alpha(k, c));
                    out.power.conditional_power(k, c) = p;
                    const double w = rho.rho(k, c);
                    if (w > kWeightFloor && p > 0.0) {
                        out.power.actual_power(k, c) = w * p;
                        rate += w * std::log2(1.0 + p * alpha(k, c));
                    }
                }
                out.report.rates[k] = rate;
                out.report.ndc_sum_rate += rate;
            }
        }
        // No NDC-held subcarrier with residual power left is possible only
        // for degenerate assignments; the residual is then simply unused.
    }

    return out;
}

}  // namespace ofdma::waterfill
