#include "ofdma/optimal_ts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ofdma/waterfill.hpp"

namespace ofdma::ts {

namespace {

constexpr double kShareFloor = 1e-12;
constexpr double kRateTol = 1e-6;  // relative deficit below which a target counts as met

double pos_log2(double x) { return x > 1.0 ? std::log2(x) : 0.0; }

struct Workspace {
    const SystemConfig& cfg;
    const Matrix<double>& alpha;
    std::vector<int> best_ndc;  // per subcarrier, argmax-CNR NDC user (-1 when none)

    Workspace(const SystemConfig& c, const Matrix<double>& a) : cfg(c), alpha(a) {
        const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);
        best_ndc.assign(n, -1);
        for (std::size_t col = 0; col < n; ++col) {
            double best = -1.0;
            for (int k = cfg.dc_users; k < cfg.users; ++k) {
                const double a_kn = alpha(static_cast<std::size_t>(k), col);
                if (a_kn > best) {
                    best = a_kn;
                    best_ndc[col] = k;
                }
            }
        }
    }
};

// Score of DC user k on column col at level `lvl`.
double dc_score(const Workspace& ws, int k, std::size_t col, double lvl, double ndc_level) {
    return occupancy_score(ws.alpha(static_cast<std::size_t>(k), col), lvl, ndc_level);
}

// Winner of a column among the DC users and the best NDC user, given levels.
// Ties at equal positive score go to the lowest index with DC first; an
// all-zero column falls to the best NDC user.
int column_winner(const Workspace& ws, std::size_t col, std::span<const double> dc_levels,
                  double ndc_level, double* winner_score = nullptr) {
    int winner = -1;
    double best = 0.0;
    for (int k = 0; k < ws.cfg.dc_users; ++k) {
        const double s = dc_score(ws, k, col, dc_levels[static_cast<std::size_t>(k)], ndc_level);
        if (s > best) {
            best = s;
            winner = k;
        }
    }
    const int nk = ws.best_ndc[col];
    if (nk >= 0) {
        const double s = occupancy_score(ws.alpha(static_cast<std::size_t>(nk), col), ndc_level,
                                         ndc_level);
        if (s > best) {
            best = s;
            winner = nk;
        }
    }
    if (winner < 0) winner = nk >= 0 ? nk : 0;  // all-zero column
    if (winner_score) *winner_score = best;
    return winner;
}

// Smallest level at which user k's score on `col` reaches `target`.
// The score is zero up to 1/alpha and strictly increasing beyond it.
double takeover_level(const Workspace& ws, int k, std::size_t col, double target,
                      double ndc_level, double level_hint) {
    const double a = ws.alpha(static_cast<std::size_t>(k), col);
    const double entry = 1.0 / a;
    if (target <= 0.0) return entry;

    double hi = std::max({2.0 * entry, level_hint, ndc_level});
    int guard = 0;
    while (occupancy_score(a, hi, ndc_level) < target) {
        hi *= 2.0;
        if (++guard > 4000) throw NonConvergenceError("takeover level bracket failed to close");
    }
    double lo = entry;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (occupancy_score(a, mid, ndc_level) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * hi) break;
    }
    return hi;
}

double dc_rate(const Workspace& ws, const SharingMatrix& rho, int k, double lvl) {
    double r = 0.0;
    const std::size_t n = static_cast<std::size_t>(ws.cfg.subcarriers);
    for (std::size_t col = 0; col < n; ++col) {
        const double w = rho.rho(static_cast<std::size_t>(k), col);
        if (w > kShareFloor)
            r += w * pos_log2(lvl * ws.alpha(static_cast<std::size_t>(k), col));
    }
    return r;
}

// Rate-exact refit of user k's level over its current (weighted) set.
double refit_level(const Workspace& ws, const SharingMatrix& rho, int k, double rate_target) {
    std::vector<std::pair<double, double>> cells;  // (alpha, weight)
    const std::size_t n = static_cast<std::size_t>(ws.cfg.subcarriers);
    for (std::size_t col = 0; col < n; ++col) {
        const double w = rho.rho(static_cast<std::size_t>(k), col);
        if (w > kShareFloor) cells.emplace_back(ws.alpha(static_cast<std::size_t>(k), col), w);
    }
    std::stable_sort(cells.begin(), cells.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> cnrs(cells.size()), weights(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cnrs[i] = cells[i].first;
        weights[i] = cells[i].second;
    }
    return waterfill::dc_level_sorted_weighted(cnrs, weights, rate_target).level;
}

// Rate of user k over its holdings excluding one column.
double dc_rate_excluding(const Workspace& ws, const SharingMatrix& rho, int k, double lvl,
                         std::size_t excluded) {
    double r = 0.0;
    const std::size_t n = static_cast<std::size_t>(ws.cfg.subcarriers);
    for (std::size_t col = 0; col < n; ++col) {
        if (col == excluded) continue;
        const double w = rho.rho(static_cast<std::size_t>(k), col);
        if (w > kShareFloor)
            r += w * pos_log2(lvl * ws.alpha(static_cast<std::size_t>(k), col));
    }
    return r;
}

// Two DC users repeatedly re-splitting one column converge only at the pace
// of the takeover margin; their joint equilibrium (a common score on the
// column with both rates exact) is solved here directly by bisecting the
// common score value.
bool settle_contested_column(const Workspace& ws, SharingMatrix& rho,
                             std::vector<double>& levels, int user_a, int user_b,
                             std::size_t col, double ndc_level) {
    const auto& cfg = ws.cfg;
    const double target_a = cfg.dc_rates[static_cast<std::size_t>(user_a)];
    const double target_b = cfg.dc_rates[static_cast<std::size_t>(user_b)];

    // share user u would need of the column when its score there equals h
    auto need = [&](int u, double target, double h, double* level_out) -> double {
        const double level = takeover_level(ws, u, col, h, ndc_level, 1.0);
        *level_out = level;
        const double contrib =
            pos_log2(level * ws.alpha(static_cast<std::size_t>(u), col));
        const double rest = dc_rate_excluding(ws, rho, u, level, col);
        if (contrib <= 0.0) return 2.0;  // score too low for the column to help
        return std::max(0.0, (target - rest) / contrib);
    };

    double la = 0.0;
    double lb = 0.0;
    auto excess = [&](double h) {
        return need(user_a, target_a, h, &la) + need(user_b, target_b, h, &lb) - 1.0;
    };

    double h_lo = 1e-9;
    if (excess(h_lo) <= 0.0) return false;  // no joint over-demand at tiny score
    double h_hi = h_lo;
    int guard = 0;
    do {
        h_hi *= 2.0;
        if (++guard > 400) return false;
    } while (excess(h_hi) > 0.0);
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (h_lo + h_hi);
        if (excess(mid) > 0.0)
            h_lo = mid;
        else
            h_hi = mid;
    }
    const double share_a = need(user_a, target_a, h_hi, &la);
    const double share_b = need(user_b, target_b, h_hi, &lb);
    if (share_a + share_b > 1.0 + 1e-6) return false;

    // The pair equilibrium only stands if nobody else outbids the column at
    // the settled score.
    const int nk = ws.best_ndc[col];
    if (nk >= 0 &&
        occupancy_score(ws.alpha(static_cast<std::size_t>(nk), col), ndc_level, ndc_level) >
            h_hi * (1.0 + 1e-9))
        return false;
    for (int k = 0; k < cfg.dc_users; ++k) {
        if (k == user_a || k == user_b) continue;
        if (dc_score(ws, k, col, levels[static_cast<std::size_t>(k)], ndc_level) >
            h_hi * (1.0 + 1e-9))
            return false;
    }

    for (int k = 0; k < cfg.users; ++k) rho.rho(static_cast<std::size_t>(k), col) = 0.0;
    rho.rho(static_cast<std::size_t>(user_a), col) = share_a;
    rho.rho(static_cast<std::size_t>(user_b), col) = share_b;
    const double leftover = 1.0 - share_a - share_b;
    if (leftover > 0.0) {
        const int nk = ws.best_ndc[col];
        rho.rho(static_cast<std::size_t>(nk >= 0 ? nk : user_a), col) += leftover;
    }
    levels[static_cast<std::size_t>(user_a)] = la;
    levels[static_cast<std::size_t>(user_b)] = lb;
    return true;
}

double consumed_power(const Workspace& ws, const SharingMatrix& rho,
                      std::span<const double> dc_levels, double ndc_level) {
    double total = 0.0;
    const std::size_t n = static_cast<std::size_t>(ws.cfg.subcarriers);
    for (int k = 0; k < ws.cfg.users; ++k) {
        const double lvl = k < ws.cfg.dc_users ? dc_levels[static_cast<std::size_t>(k)]
                                               : ndc_level;
        for (std::size_t col = 0; col < n; ++col) {
            const double w = rho.rho(static_cast<std::size_t>(k), col);
            if (w > kShareFloor)
                total += w * pos(lvl - 1.0 / ws.alpha(static_cast<std::size_t>(k), col));
        }
    }
    return total;
}

}  // namespace

int bisection_updates(double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("bisection_updates: epsilon must be > 0");
    return static_cast<int>(std::ceil(std::log2(4.0 / epsilon)));
}

double occupancy_score(double alpha, double level, double ndc_level) {
    const double x = alpha * level;
    if (x <= 1.0) return 0.0;
    const double brace = std::log2(x) - (1.0 - 1.0 / x) / std::numbers::ln2;
    return level / ndc_level * brace;
}

SharingMatrix assign_by_score(const Matrix<double>& alpha, int dc_users,
                              std::span<const double> dc_levels, double ndc_level) {
    SystemConfig cfg;
    cfg.users = static_cast<int>(alpha.rows());
    cfg.dc_users = dc_users;
    cfg.subcarriers = static_cast<int>(alpha.cols());
    cfg.total_power = 1.0;
    cfg.dc_rates.assign(static_cast<std::size_t>(dc_users), 1.0);
    Workspace ws(cfg, alpha);

    SharingMatrix out;
    out.rho = Matrix<double>(alpha.rows(), alpha.cols(), 0.0);
    for (std::size_t col = 0; col < alpha.cols(); ++col) {
        const int w = column_winner(ws, col, dc_levels, ndc_level);
        out.rho(static_cast<std::size_t>(w), col) = 1.0;
    }
    return out;
}

WaterLevelState inner_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                            double ndc_level, const SolverSettings& settings) {
    cfg.validate();
    if (!(ndc_level > 0.0)) throw std::invalid_argument("inner_solve: ndc_level must be > 0");
    Workspace ws(cfg, alpha);

    const int dc = cfg.dc_users;
    const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);

    WaterLevelState st;
    st.ndc_level = ndc_level;
    st.dc_levels.assign(static_cast<std::size_t>(dc), 0.0);
    st.dc_rates.assign(static_cast<std::size_t>(dc), 0.0);

    // Step 1: minimum levels as if each DC user owned the whole band, then
    // an exclusive assignment by score.
    for (int k = 0; k < dc; ++k)
        st.dc_levels[static_cast<std::size_t>(k)] =
            waterfill::dc_water_level(alpha.row(static_cast<std::size_t>(k)), cfg.dc_rates[static_cast<std::size_t>(k)])
                .level;
    st.rho = assign_by_score(alpha, dc, st.dc_levels, ndc_level);

    std::vector<std::size_t> claim_cols;
    std::vector<double> claim_levels;
    std::vector<int> split_repeats(n, 0);  // DC-vs-DC re-splits per column

    while (true) {
        // Step 2: recompute every DC rate.
        for (int k = 0; k < dc; ++k)
            st.dc_rates[static_cast<std::size_t>(k)] =
                dc_rate(ws, st.rho, k, st.dc_levels[static_cast<std::size_t>(k)]);

        // Step 3a: the user farthest below its target.
        int kstar = -1;
        double worst = 0.0;
        for (int k = 0; k < dc; ++k) {
            const double target = cfg.dc_rates[static_cast<std::size_t>(k)];
            const double deficit = target - st.dc_rates[static_cast<std::size_t>(k)];
            if (deficit > kRateTol * target && deficit > worst) {
                worst = deficit;
                kstar = k;
            }
        }
        if (kstar < 0) break;

        if (++st.passes > settings.max_inner) {
            std::ostringstream msg;
            msg << "inner_solve: pass cap " << settings.max_inner
                << " exceeded at ndc_level " << ndc_level << ", worst deficit " << worst;
            throw NonConvergenceError(msg.str());
        }
        const double target_rate = cfg.dc_rates[static_cast<std::size_t>(kstar)];

        // Step 3b: takeover levels for every column the user does not own.
        claim_cols.clear();
        claim_levels.clear();
        for (std::size_t col = 0; col < n; ++col) {
            if (st.rho.rho(static_cast<std::size_t>(kstar), col) >= 1.0 - kShareFloor) continue;
            double winner_score = 0.0;
            column_winner(ws, col, st.dc_levels, ndc_level, &winner_score);
            claim_cols.push_back(col);
            claim_levels.push_back(takeover_level(
                ws, kstar, col, (1.0 + settings.delta) * winner_score, ndc_level,
                st.dc_levels[static_cast<std::size_t>(kstar)]));
        }

        // Step 3c: claim columns in increasing takeover-level order until the
        // target is reached. The last claimed column's previous shares are
        // kept so an overshoot can hand them back.
        double rate = st.dc_rates[static_cast<std::size_t>(kstar)];
        std::size_t last_col = n;  // invalid
        bool refit_done = false;
        std::vector<double> last_col_before(static_cast<std::size_t>(cfg.users), 0.0);
        while (rate < target_rate * (1.0 - kRateTol)) {
            std::size_t pick = claim_cols.size();
            for (std::size_t i = 0; i < claim_cols.size(); ++i) {
                if (claim_cols[i] == n) continue;  // already taken
                if (pick == claim_cols.size() || claim_levels[i] < claim_levels[pick])
                    pick = i;
            }
            if (pick == claim_cols.size()) {
                // Nothing left to claim: the user owns every column, so its
                // own-set level always reaches the target.
                st.dc_levels[static_cast<std::size_t>(kstar)] =
                    refit_level(ws, st.rho, kstar, target_rate);
                rate = target_rate;
                refit_done = true;
                break;
            }
            const std::size_t m = claim_cols[pick];
            st.dc_levels[static_cast<std::size_t>(kstar)] = claim_levels[pick];
            claim_cols[pick] = n;

            for (int k = 0; k < cfg.users; ++k) {
                last_col_before[static_cast<std::size_t>(k)] =
                    st.rho.rho(static_cast<std::size_t>(k), m);
                st.rho.rho(static_cast<std::size_t>(k), m) = 0.0;
            }
            st.rho.rho(static_cast<std::size_t>(kstar), m) = 1.0;
            last_col = m;
            rate = dc_rate(ws, st.rho, kstar, st.dc_levels[static_cast<std::size_t>(kstar)]);
        }

        // Step 3d: resolve overshoot on the last claimed column, keeping only
        // the needed share and handing the rest back to the displaced holders
        // in their previous proportions (for an exclusive previous state this
        // is exactly "return it to the old winner").
        if (!refit_done && rate > target_rate * (1.0 + kRateTol) && last_col < n) {
            double displaced = 0.0;
            for (int k = 0; k < cfg.users; ++k)
                if (k != kstar) displaced += last_col_before[static_cast<std::size_t>(k)];

            const double contrib =
                pos_log2(st.dc_levels[static_cast<std::size_t>(kstar)] *
                         ws.alpha(static_cast<std::size_t>(kstar), last_col));
            const double rate_minus = rate - contrib;

            // keep == 0 restores the previous column state exactly; a partial
            // keep hands the remainder to the largest previous holder so the
            // column never carries more than one fractional pair.
            auto hand_back = [&](double keep) {
                if (keep <= 0.0 && displaced > kShareFloor) {
                    // kstar's own previous share, if any, is spread over the
                    // other holders proportionally
                    for (int k = 0; k < cfg.users; ++k)
                        st.rho.rho(static_cast<std::size_t>(k), last_col) =
                            k == kstar
                                ? 0.0
                                : last_col_before[static_cast<std::size_t>(k)] / displaced;
                    return;
                }
                st.rho.rho(static_cast<std::size_t>(kstar), last_col) = keep;
                int recipient = -1;
                for (int k = 0; k < cfg.users; ++k) {
                    if (k == kstar) continue;
                    if (recipient < 0 || last_col_before[static_cast<std::size_t>(k)] >
                                             last_col_before[static_cast<std::size_t>(recipient)])
                        recipient = k;
                }
                if (recipient < 0 ||
                    last_col_before[static_cast<std::size_t>(recipient)] <= kShareFloor)
                    recipient = ws.best_ndc[last_col] >= 0 ? ws.best_ndc[last_col] : recipient;
                if (recipient >= 0 && recipient != kstar)
                    st.rho.rho(static_cast<std::size_t>(recipient), last_col) = 1.0 - keep;
                else
                    st.rho.rho(static_cast<std::size_t>(kstar), last_col) = 1.0;
            };

            if (rate_minus < target_rate * (1.0 - kRateTol) && contrib > 0.0) {
                hand_back((target_rate - rate_minus) / contrib);
                // Two DC users re-splitting the same column drift toward their
                // joint equilibrium one margin step at a time; once the
                // pattern clearly stalls, settle the column exactly.
                int other_dc = -1;
                for (int k = 0; k < dc; ++k)
                    if (k != kstar &&
                        st.rho.rho(static_cast<std::size_t>(k), last_col) > 1e-9)
                        other_dc = k;
                if (other_dc >= 0 && ++split_repeats[last_col] >= 6 &&
                    split_repeats[last_col] % 6 == 0)
                    settle_contested_column(ws, st.rho, st.dc_levels, kstar, other_dc,
                                            last_col, ndc_level);
            } else {
                hand_back(0.0);
                st.dc_levels[static_cast<std::size_t>(kstar)] =
                    refit_level(ws, st.rho, kstar, target_rate);
            }
        }
    }

    st.consumed_power = consumed_power(ws, st.rho, st.dc_levels, ndc_level);
    return st;
}

Allocation outer_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                       const SolverSettings& settings) {
    cfg.validate();
    if (alpha.rows() != static_cast<std::size_t>(cfg.users) ||
        alpha.cols() != static_cast<std::size_t>(cfg.subcarriers))
        throw std::invalid_argument("outer_solve: alpha dimensions mismatch");

    IterationCounts counts;

    // No NDC users: a single margin solve decides feasibility.
    if (cfg.ndc_users() == 0) {
        WaterLevelState st = inner_solve(cfg, alpha, 1.0, settings);
        counts.inner = st.passes;
        Allocation out = waterfill::allocate_given_assignment(cfg, alpha, st.rho);
        out.report.iterations = counts;
        out.report.solver = SolverId::time_sharing;
        return out;
    }

    double min_recip = std::numeric_limits<double>::infinity();
    for (int k = cfg.dc_users; k < cfg.users; ++k)
        for (int c = 0; c < cfg.subcarriers; ++c)
            min_recip = std::min(min_recip,
                                 1.0 / alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)));
    const double level_init = min_recip * (1.0 - settings.delta_init);

    WaterLevelState st = inner_solve(cfg, alpha, level_init, settings);
    counts.inner += st.passes;

    const bool outage = st.consumed_power > cfg.total_power;
    if (outage && !settings.full_search_on_outage) {
        Allocation out = waterfill::allocate_given_assignment(cfg, alpha, st.rho);
        out.report.iterations = counts;
        out.report.solver = SolverId::time_sharing;
        out.report.outage = true;
        return out;
    }

    // The returned allocation is the best exact re-balance over every state
    // evaluated on the feasible side of the bracket. The level-repair loop's
    // output is only piecewise-stable in the NDC level, so trusting the last
    // bracket point alone would make the result sensitive to tie noise.
    Allocation best_alloc;
    double best_rate = -1.0;
    auto offer = [&](const WaterLevelState& state) {
        if (state.consumed_power > cfg.total_power) return;
        Allocation cand = waterfill::allocate_given_assignment(cfg, alpha, state.rho);
        if (!cand.report.outage && cand.report.ndc_sum_rate > best_rate) {
            best_rate = cand.report.ndc_sum_rate;
            best_alloc = std::move(cand);
        }
    };

    double lb = level_init;
    double ub = level_init;
    WaterLevelState last_feasible = st;
    if (!outage) {
        offer(st);
        WaterLevelState cur = st;
        while (cur.consumed_power < cfg.total_power) {
            if (counts.doublings >= settings.max_outer)
                throw NonConvergenceError("outer_solve: bracket doubling cap exceeded");
            ++counts.doublings;
            lb = ub;  // the last level that still under-consumed
            ub *= 2.0;
            cur = inner_solve(cfg, alpha, ub, settings);
            counts.inner += cur.passes;
            offer(cur);
        }
    }

    const int updates = bisection_updates(settings.epsilon);
    for (int i = 0; i < updates; ++i) {
        const double mid = 0.5 * (lb + ub);
        WaterLevelState cur = inner_solve(cfg, alpha, mid, settings);
        counts.inner += cur.passes;
        counts.inner_bisection += cur.passes;
        ++counts.outer;
        if (cur.consumed_power > cfg.total_power) {
            ub = mid;
        } else {
            lb = mid;
            last_feasible = cur;
            offer(cur);
        }
    }

    if (best_rate < 0.0) {
        // outage (possibly under full_search_on_outage): report the exact
        // numbers of the initial state
        Allocation out = waterfill::allocate_given_assignment(cfg, alpha, last_feasible.rho);
        out.report.iterations = counts;
        out.report.solver = SolverId::time_sharing;
        out.report.outage = true;
        return out;
    }

    // Columns left time-shared between two DC users mark assignment ties the
    // level repair could have resolved either way; the whole-column variants
    // are sometimes strictly better, so re-balance each of them too.
    {
        const std::size_t n = static_cast<std::size_t>(cfg.subcarriers);
        std::vector<std::size_t> shared_cols;
        std::vector<std::vector<int>> holders;
        const SharingMatrix base = best_alloc.rho;
        for (std::size_t c = 0; c < n && shared_cols.size() < 6; ++c) {
            std::vector<int> dc_holders;
            for (int k = 0; k < cfg.dc_users; ++k)
                if (base.rho(static_cast<std::size_t>(k), c) > 1e-9 &&
                    base.rho(static_cast<std::size_t>(k), c) < 1.0 - 1e-9)
                    dc_holders.push_back(k);
            if (dc_holders.size() >= 1) {
                shared_cols.push_back(c);
                holders.push_back(std::move(dc_holders));
            }
        }
        if (!shared_cols.empty()) {
            std::size_t combos = 1;
            for (const auto& h : holders) combos *= h.size() + 1;  // each holder or drop
            if (combos <= 64) {
                for (std::size_t pick = 0; pick < combos; ++pick) {
                    SharingMatrix variant = base;
                    std::size_t rest = pick;
                    for (std::size_t i = 0; i < shared_cols.size(); ++i) {
                        const std::size_t c = shared_cols[i];
                        const std::size_t choice = rest % (holders[i].size() + 1);
                        rest /= holders[i].size() + 1;
                        for (int k = 0; k < cfg.users; ++k)
                            variant.rho(static_cast<std::size_t>(k), c) = 0.0;
                        if (choice < holders[i].size()) {
                            variant.rho(static_cast<std::size_t>(holders[i][choice]), c) = 1.0;
                        } else {
                            int nk = cfg.dc_users;
                            for (int k = cfg.dc_users + 1; k < cfg.users; ++k)
                                if (alpha(static_cast<std::size_t>(k), c) >
                                    alpha(static_cast<std::size_t>(nk), c))
                                    nk = k;
                            variant.rho(static_cast<std::size_t>(nk), c) = 1.0;
                        }
                    }
                    Allocation cand = waterfill::allocate_given_assignment(cfg, alpha, variant);
                    if (!cand.report.outage && cand.report.ndc_sum_rate > best_rate) {
                        best_rate = cand.report.ndc_sum_rate;
                        best_alloc = std::move(cand);
                    }
                }
            }
        }
    }

    best_alloc.report.iterations = counts;
    best_alloc.report.solver = SolverId::time_sharing;
    if (outage) best_alloc.report.outage = true;
    return best_alloc;
}

}  // namespace ofdma::ts
