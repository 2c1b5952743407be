#include "ofdma/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ofdma/optimal_ts.hpp"
#include "ofdma/waterfill.hpp"

namespace ofdma::dual {

namespace {

// Candidate term of user k on one subcarrier at tilde-beta b:
//   b * [log2(alpha b / (mu ln2))]^+ - mu * (b/(mu ln2) - 1/alpha)^+
double candidate_value(double alpha, double tilde_beta, double mu) {
    const double level = tilde_beta / (mu * std::numbers::ln2);
    const double x = alpha * level;
    if (x <= 1.0) return 0.0;
    return tilde_beta * std::log2(x) - mu * (level - 1.0 / alpha);
}

// Feasibility and NDC sum-rate of a winner map without building matrices;
// shares the water-filling kernels so the outage verdict matches
// allocate_given_assignment exactly.
struct LeanRecovery {
    bool feasible = false;
    double ndc_rate = 0.0;
};

LeanRecovery lean_recover(const SystemConfig& cfg, const Matrix<double>& alpha,
                          std::span<const int> winners, std::vector<double>& scratch) {
    LeanRecovery out;
    double dc_total = 0.0;
    for (int k = 0; k < cfg.dc_users; ++k) {
        scratch.clear();
        for (int c = 0; c < cfg.subcarriers; ++c)
            if (winners[static_cast<std::size_t>(c)] == k)
                scratch.push_back(alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
        if (scratch.empty()) return out;
        std::sort(scratch.begin(), scratch.end(), std::greater<>());
        const auto lv = waterfill::dc_level_sorted(scratch, cfg.dc_rates[static_cast<std::size_t>(k)]);
        for (int i = 0; i < lv.active; ++i)
            dc_total += lv.level - 1.0 / scratch[static_cast<std::size_t>(i)];
        if (dc_total > cfg.total_power) return out;
    }
    out.feasible = true;

    scratch.clear();
    for (int c = 0; c < cfg.subcarriers; ++c) {
        const int w = winners[static_cast<std::size_t>(c)];
        if (w >= cfg.dc_users)
            scratch.push_back(alpha(static_cast<std::size_t>(w), static_cast<std::size_t>(c)));
    }
    if (!scratch.empty()) {
        std::sort(scratch.begin(), scratch.end(), std::greater<>());
        const auto lv = waterfill::ndc_level_sorted(scratch, cfg.total_power - dc_total);
        for (int i = 0; i < lv.active; ++i)
            out.ndc_rate += std::log2(lv.level * scratch[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace

SubcarrierMax per_subcarrier_max(std::span<const double> alpha_column, int dc_users,
                                 const DualPoint& point) {
    if (!(point.mu > 0.0))
        throw std::domain_error("per_subcarrier_max: dual is unbounded at mu <= 0");
    if (static_cast<int>(point.beta.size()) != dc_users)
        throw std::invalid_argument("per_subcarrier_max: beta size mismatch");

    SubcarrierMax best{0, 0.0, 0.0};
    bool first = true;
    for (int k = 0; k < static_cast<int>(alpha_column.size()); ++k) {
        const double tilde_beta =
            k < dc_users ? point.beta[static_cast<std::size_t>(k)] : 1.0;
        const double value =
            tilde_beta > 0.0
                ? candidate_value(alpha_column[static_cast<std::size_t>(k)], tilde_beta, point.mu)
                : 0.0;
        if (first || value > best.value) {
            first = false;
            best.winner = k;
            best.value = value;
            const double level = tilde_beta / (point.mu * std::numbers::ln2);
            best.power = pos(level - 1.0 / alpha_column[static_cast<std::size_t>(k)]);
        }
    }
    return best;
}

DualEvaluation eval_dual(const SystemConfig& cfg, const Matrix<double>& alpha,
                         const DualPoint& point) {
    cfg.validate();
    const std::size_t users = static_cast<std::size_t>(cfg.users);
    const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);

    DualEvaluation ev;
    ev.winners.assign(n, 0);
    ev.powers = Matrix<double>(users, n, 0.0);
    ev.subgrad_beta.assign(static_cast<std::size_t>(cfg.dc_users), 0.0);

    std::vector<double> column(users);
    double g = 0.0;
    double consumed = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < users; ++k) column[k] = alpha(k, c);
        const SubcarrierMax m = per_subcarrier_max(column, cfg.dc_users, point);
        ev.winners[c] = m.winner;
        ev.powers(static_cast<std::size_t>(m.winner), c) = m.power;
        g += m.value;
        consumed += m.power;
        if (m.winner < cfg.dc_users && m.power > 0.0)
            ev.subgrad_beta[static_cast<std::size_t>(m.winner)] +=
                std::log2(1.0 + m.power * alpha(static_cast<std::size_t>(m.winner), c));
    }
    for (int k = 0; k < cfg.dc_users; ++k) {
        g -= point.beta[static_cast<std::size_t>(k)] * cfg.dc_rates[static_cast<std::size_t>(k)];
        ev.subgrad_beta[static_cast<std::size_t>(k)] -= cfg.dc_rates[static_cast<std::size_t>(k)];
    }
    g += point.mu * cfg.total_power;
    ev.g_value = g;
    ev.subgrad_mu = cfg.total_power - consumed;
    return ev;
}

double mu_upper_bound(const SystemConfig& cfg, const Matrix<double>& alpha) {
    double max_ndc = 0.0;
    for (int k = cfg.dc_users; k < cfg.users; ++k)
        for (int c = 0; c < cfg.subcarriers; ++c)
            max_ndc = std::max(max_ndc,
                               alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
    return max_ndc / std::numbers::ln2;
}

double beta_upper_bound(const SystemConfig& cfg, const Matrix<double>& alpha) {
    double max_ndc = 0.0;
    for (int k = cfg.dc_users; k < cfg.users; ++k)
        for (int c = 0; c < cfg.subcarriers; ++c)
            max_ndc = std::max(max_ndc,
                               alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
    // Loosest consistent reading: the inner min ranges over every user's
    // entries, so the box provably contains the optimum.
    double min_all = std::numeric_limits<double>::infinity();
    for (double a : alpha.data()) min_all = std::min(min_all, a);
    return max_ndc * (cfg.total_power + 1.0 / min_all);
}

EllipsoidState initial_ellipsoid(const SystemConfig& cfg, const Matrix<double>& alpha) {
    cfg.validate();
    if (cfg.dc_users < 1)
        throw std::invalid_argument(
            "initial_ellipsoid: needs a DC user (the dual is one-dimensional otherwise)");
    if (cfg.ndc_users() < 1)
        throw std::invalid_argument("initial_ellipsoid: needs an NDC user");

    const int dim = cfg.dc_users + 1;
    const double beta_max = beta_upper_bound(cfg, alpha);
    const double mu_max = mu_upper_bound(cfg, alpha);

    EllipsoidState st;
    st.center.assign(static_cast<std::size_t>(dim), 0.0);
    st.shape = Matrix<double>(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < cfg.dc_users; ++i) {
        st.center[static_cast<std::size_t>(i)] = 0.5 * beta_max;
        st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) =
            static_cast<double>(dim) * (0.5 * beta_max) * (0.5 * beta_max);
    }
    st.center[static_cast<std::size_t>(dim - 1)] = 0.5 * mu_max;
    st.shape(static_cast<std::size_t>(dim - 1), static_cast<std::size_t>(dim - 1)) =
        static_cast<double>(dim) * (0.5 * mu_max) * (0.5 * mu_max);
    return st;
}

Allocation solve_dual(const SystemConfig& cfg, const Matrix<double>& alpha,
                      const DualSettings& settings, DualPoint* best_point) {
    cfg.validate();
    if (cfg.ndc_users() == 0)
        throw std::invalid_argument("solve_dual: needs at least one NDC user");

    const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);

    // Degenerate dual without DC constraints: the optimum is the best-CNR
    // assignment with a single water level.
    if (cfg.dc_users == 0) {
        std::vector<int> winners(n, cfg.dc_users);
        for (std::size_t c = 0; c < n; ++c) {
            int best = cfg.dc_users;
            for (int k = cfg.dc_users + 1; k < cfg.users; ++k)
                if (alpha(static_cast<std::size_t>(k), c) >
                    alpha(static_cast<std::size_t>(best), c))
                    best = k;
            winners[c] = best;
        }
        Allocation out = waterfill::allocate_given_assignment(
            cfg, alpha, SharingMatrix::exclusive(winners, cfg.users));
        out.report.solver = SolverId::dual_decomposition;
        return out;
    }

    const int dim = cfg.dc_users + 1;
    const double mu_max = mu_upper_bound(cfg, alpha);
    const double mu_floor = settings.mu_floor_rel * mu_max;
    std::vector<double> bounds(static_cast<std::size_t>(dim), beta_upper_bound(cfg, alpha));
    bounds[static_cast<std::size_t>(dim - 1)] = mu_max;

    EllipsoidState st = initial_ellipsoid(cfg, alpha);
    const int max_iter =
        settings.max_iterations > 0 ? settings.max_iterations : 500 * dim * dim;

    // Per-step volume shrink of a central cut is fixed by the dimension.
    const double d = static_cast<double>(dim);
    const double log_vol_step =
        0.5 * (d * std::log(d * d / (d * d - 1.0)) + std::log((d - 1.0) / (d + 1.0)));
    double log_vol = 0.0;
    const double log_vol_stop = std::log(settings.volume_tol);

    std::vector<double> cut(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> shape_cut(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> scratch;

    double best_g = std::numeric_limits<double>::infinity();
    DualPoint best_dual;
    std::vector<int> best_winners;
    double best_feasible_rate = -1.0;
    std::vector<int> best_feasible_winners;
    bool converged = false;

    while (st.iteration < max_iter) {
        // Constraint cut when the center leaves the bound box, else an
        // objective cut along the subgradient.
        std::fill(cut.begin(), cut.end(), 0.0);
        int violated = -1;
        double worst = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double x = st.center[static_cast<std::size_t>(i)];
            if (x < 0.0 && -x > worst) {
                worst = -x;
                violated = i;
                cut.assign(cut.size(), 0.0);
                cut[static_cast<std::size_t>(i)] = -1.0;
            }
            const double over = x - bounds[static_cast<std::size_t>(i)];
            if (over > 0.0 && over > worst) {
                worst = over;
                violated = i;
                cut.assign(cut.size(), 0.0);
                cut[static_cast<std::size_t>(i)] = 1.0;
            }
        }

        if (violated < 0) {
            DualPoint point;
            point.beta.assign(st.center.begin(), st.center.end() - 1);
            point.mu = std::max(st.center.back(), mu_floor);
            const DualEvaluation ev = eval_dual(cfg, alpha, point);
            if (ev.g_value < best_g) {
                best_g = ev.g_value;
                best_dual = point;
                best_winners = ev.winners;
            }
            const LeanRecovery rec = lean_recover(cfg, alpha, ev.winners, scratch);
            if (rec.feasible && rec.ndc_rate > best_feasible_rate) {
                best_feasible_rate = rec.ndc_rate;
                best_feasible_winners = ev.winners;
            }
            for (int i = 0; i < cfg.dc_users; ++i)
                cut[static_cast<std::size_t>(i)] = ev.subgrad_beta[static_cast<std::size_t>(i)];
            cut[static_cast<std::size_t>(dim - 1)] = ev.subgrad_mu;
        }

        // Central-cut ellipsoid update along `cut`.
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (int j = 0; j < dim; ++j)
                acc += st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                       cut[static_cast<std::size_t>(j)];
            shape_cut[static_cast<std::size_t>(i)] = acc;
            norm2 += acc * cut[static_cast<std::size_t>(i)];
        }
        if (!(norm2 > 0.0)) break;  // degenerate ellipsoid or zero subgradient
        const double norm = std::sqrt(norm2);

        for (int i = 0; i < dim; ++i)
            st.center[static_cast<std::size_t>(i)] -=
                shape_cut[static_cast<std::size_t>(i)] / (norm * (d + 1.0));
        const double scale = d * d / (d * d - 1.0);
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double updated =
                    scale * (st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                             2.0 / (d + 1.0) * shape_cut[static_cast<std::size_t>(i)] *
                                 shape_cut[static_cast<std::size_t>(j)] / norm2);
                st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = updated;
            }
        }
        // re-symmetrize against drift
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) {
                const double avg =
                    0.5 * (st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +
                           st.shape(static_cast<std::size_t>(j), static_cast<std::size_t>(i)));
                st.shape(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = avg;
                st.shape(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = avg;
            }

        ++st.iteration;
        log_vol += log_vol_step;
        if (log_vol <= log_vol_stop) {
            converged = true;
            break;
        }
    }

    if (best_winners.empty())
        throw NonConvergenceError("solve_dual: no dual point was ever evaluated");
    if (best_point) *best_point = best_dual;

    // Tie resolution around the minimizer: at the dual optimum a DC user's
    // beta can sit exactly on the boundary where it wins or loses its columns,
    // so the maximizer map may starve it even though serving it is optimal.
    // Nudging the betas upward crosses those boundaries; every candidate map
    // is still feasibility-checked and re-solved exactly.
    auto consider = [&](const DualPoint& point) {
        const DualEvaluation ev = eval_dual(cfg, alpha, point);
        const LeanRecovery rec = lean_recover(cfg, alpha, ev.winners, scratch);
        if (rec.feasible && rec.ndc_rate > best_feasible_rate) {
            best_feasible_rate = rec.ndc_rate;
            best_feasible_winners = ev.winners;
        }
    };
    const double inflations[] = {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0};
    DualPoint probe = best_dual;
    probe.mu = std::max(probe.mu, mu_floor);
    for (double eps : inflations) {
        DualPoint all = probe;
        for (double& b : all.beta) b *= 1.0 + eps;
        consider(all);
    }
    for (int k = 0; k < cfg.dc_users; ++k) {
        for (double eps : {1e-2, 0.1, 0.35}) {
            DualPoint one = probe;
            one.beta[static_cast<std::size_t>(k)] *= 1.0 + eps;
            consider(one);
        }
    }

    // Primal repair. The duality gap does not vanish on small instances: the
    // maximizer map at the optimum can starve a DC user outright (its beta
    // sits on the win/lose boundary) or land a column short of the best
    // exclusive map. Two deterministic passes close the gap: starved users
    // claim their minimum-regret columns, then a one-exchange descent polishes
    // the map. Every candidate is feasibility-checked and rated with the same
    // exact water-filling the final allocation uses.
    std::vector<int> best_ndc(n, cfg.dc_users);
    for (std::size_t c = 0; c < n; ++c)
        for (int k = cfg.dc_users + 1; k < cfg.users; ++k)
            if (alpha(static_cast<std::size_t>(k), c) >
                alpha(static_cast<std::size_t>(best_ndc[c]), c))
                best_ndc[c] = k;

    auto try_map = [&](const std::vector<int>& candidate) -> double {
        const LeanRecovery rec = lean_recover(cfg, alpha, candidate, scratch);
        if (rec.feasible && rec.ndc_rate > best_feasible_rate) {
            best_feasible_rate = rec.ndc_rate;
            best_feasible_winners = candidate;
        }
        return rec.feasible ? rec.ndc_rate : -1.0;
    };

    auto point_value = [&](int user, std::size_t c) {
        const double tb =
            user < cfg.dc_users ? probe.beta[static_cast<std::size_t>(user)] : 1.0;
        return candidate_value(alpha(static_cast<std::size_t>(user), c), tb, probe.mu);
    };

    auto repair_starved = [&](std::vector<int> map) {
        std::vector<int> held(static_cast<std::size_t>(cfg.dc_users), 0);
        for (int owner : map)
            if (owner < cfg.dc_users) ++held[static_cast<std::size_t>(owner)];
        for (int k = 0; k < cfg.dc_users; ++k) {
            if (held[static_cast<std::size_t>(k)] > 0) continue;
            // cheapest takeover in dual value; a DC user's last column is safe
            std::size_t pick = n;
            double best_regret = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
                const int owner = map[c];
                if (owner < cfg.dc_users && held[static_cast<std::size_t>(owner)] <= 1)
                    continue;
                const double regret = point_value(owner, c) - point_value(k, c);
                if (pick == n || regret < best_regret) {
                    pick = c;
                    best_regret = regret;
                }
            }
            if (pick == n) return;  // nothing claimable
            const int prev = map[pick];
            if (prev < cfg.dc_users) --held[static_cast<std::size_t>(prev)];
            map[pick] = k;
            ++held[static_cast<std::size_t>(k)] ;
        }
        try_map(map);
    };
    repair_starved(best_winners);
    if (!best_feasible_winners.empty()) repair_starved(best_feasible_winners);

    // Also seed from the time-sharing level repair at L0 = 1/(mu* ln2); the
    // winner map at a dual point is the occupancy-score assignment at the
    // implied levels, so this resolves the same degeneracy from the other side.
    try {
        const double level = 1.0 / (probe.mu * std::numbers::ln2);
        const ts::WaterLevelState repaired = ts::inner_solve(cfg, alpha, level);
        std::vector<int> owners(n, 0);
        for (std::size_t c = 0; c < n; ++c) {
            int major = 0;
            for (int k = 1; k < cfg.users; ++k)
                if (repaired.rho.rho(static_cast<std::size_t>(k), c) >
                    repaired.rho.rho(static_cast<std::size_t>(major), c))
                    major = k;
            owners[c] = major;
        }
        try_map(owners);
        repair_starved(owners);
    } catch (const NonConvergenceError&) {
        // keep whatever the dual path already found
    }

    // One-exchange polish on small instances, where the residual duality gap
    // is material. Larger systems already recover within the gap.
    if (best_feasible_rate >= 0.0 && cfg.subcarriers <= 24) {
        std::vector<int> cur = best_feasible_winners;
        double cur_rate = best_feasible_rate;
        for (int round = 0; round < 12; ++round) {
            bool improved = false;
            std::vector<int> held(static_cast<std::size_t>(cfg.dc_users), 0);
            for (int owner : cur)
                if (owner < cfg.dc_users) ++held[static_cast<std::size_t>(owner)];
            auto offer = [&](const std::vector<int>& cand) {
                const LeanRecovery rec = lean_recover(cfg, alpha, cand, scratch);
                if (rec.feasible && rec.ndc_rate > cur_rate + 1e-12) {
                    cur_rate = rec.ndc_rate;
                    cur = cand;
                    improved = true;
                }
            };
            for (int k = 0; k < cfg.dc_users; ++k) {
                for (std::size_t c = 0; c < n; ++c) {
                    if (cur[c] != k) {
                        // pure claim of a column held by someone who can spare it
                        const int prev = cur[c];
                        if (prev >= cfg.dc_users || held[static_cast<std::size_t>(prev)] > 1) {
                            std::vector<int> cand = cur;
                            cand[c] = k;
                            offer(cand);
                        }
                        continue;
                    }
                    for (std::size_t c2 = 0; c2 <= n; ++c2) {
                        // c2 == n encodes a pure release
                        std::vector<int> cand = cur;
                        cand[c] = best_ndc[c];
                        if (c2 < n) {
                            if (cur[c2] == k || c2 == c) continue;
                            const int prev = cand[c2];
                            if (prev < cfg.dc_users) {
                                // exchange columns with the other DC user
                                cand[c] = prev;
                                cand[c2] = k;
                                offer(cand);
                                cand[c] = best_ndc[c];
                                if (held[static_cast<std::size_t>(prev)] <= 1) continue;
                            }
                            cand[c2] = k;
                        } else if (held[static_cast<std::size_t>(k)] <= 1) {
                            continue;
                        }
                        offer(cand);
                    }
                }
            }
            if (!improved) break;
        }
        if (cur_rate > best_feasible_rate) {
            best_feasible_rate = cur_rate;
            best_feasible_winners = cur;
        }
    }

    Allocation out;
    if (best_feasible_rate >= 0.0) {
        out = waterfill::allocate_given_assignment(
            cfg, alpha, SharingMatrix::exclusive(best_feasible_winners, cfg.users));
    } else {
        out = waterfill::allocate_given_assignment(
            cfg, alpha, SharingMatrix::exclusive(best_winners, cfg.users));
        out.report.outage = true;
    }
    out.report.solver = SolverId::dual_decomposition;
    out.report.iterations.outer = st.iteration;
    out.report.converged = converged;
    return out;
}

}  // namespace ofdma::dual
