#include "ofdma/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ofdma/baselines.hpp"
#include "ofdma/greedy.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/waterfill.hpp"

namespace ofdma::harness {

namespace {

constexpr std::uint64_t kChannelTag = 0x636861;  // substream tag for channel draws
constexpr std::uint64_t kIidTag = 0x696964;      // substream tag for iid CNR draws

int worker_count(const ExperimentSpec& spec) {
    if (spec.threads > 0) return spec.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename F>
void parallel_trials(int trials, int workers, F&& body) {
    workers = std::max(1, std::min(workers, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int t = w; t < trials; t += workers) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

SystemConfig with_rates(SystemConfig cfg, double rdc) {
    cfg.dc_rates.assign(static_cast<std::size_t>(cfg.dc_users),
                        cfg.dc_users > 0 ? rdc / cfg.dc_users : 0.0);
    return cfg;
}

struct TrialOutcome {
    bool outage = true;
    double ndc_rate = 0.0;
    double iterations = 0.0;
};

TrialOutcome outcome_of(const Allocation& a) {
    TrialOutcome o;
    o.outage = a.report.outage;
    o.ndc_rate = a.report.ndc_sum_rate;
    o.iterations = static_cast<double>(a.report.iterations.total());
    return o;
}

struct AlgoStats {
    int outages = 0;
    int served = 0;  // non-outage trials
    double rate_sum = 0.0;
    double iter_sum = 0.0;

    void add(const TrialOutcome& o) {
        if (o.outage) {
            ++outages;
        } else {
            ++served;
            rate_sum += o.ndc_rate;
        }
        iter_sum += o.iterations;
    }
};

ResultRow make_row(const std::string& experiment, Algo algo, const SystemConfig& cfg,
                   double snr_db, double rdc, const AlgoStats& st, int trials) {
    ResultRow row;
    row.experiment = experiment;
    row.algo = algo_name(algo);
    row.snr_db = snr_db;
    row.rdc = rdc;
    row.dc_users = cfg.dc_users;
    row.subcarriers = cfg.subcarriers;
    row.ndc_users = cfg.ndc_users();
    row.outage_prob = trials > 0 ? static_cast<double>(st.outages) / trials : 0.0;
    const WilsonInterval ci = wilson_interval(st.outages, trials);
    row.outage_ci_lo = ci.lo;
    row.outage_ci_hi = ci.hi;
    row.avg_ndc_rate = st.served > 0 ? st.rate_sum / st.served : 0.0;
    row.avg_iterations = trials > 0 ? st.iter_sum / trials : 0.0;
    row.trials_used = st.served;
    return row;
}

// Evaluates every requested algorithm at one (rdc, snr) point under common
// random numbers. Used by the sweep, min-SNR bisection and rate region.
std::vector<AlgoStats> point_stats(const ExperimentSpec& spec, double rdc, double snr_db,
                                   std::span<const Algo> algos) {
    const SystemConfig base = with_rates(spec.cfg, rdc);
    base.validate();

    const bool wants_fsa = std::find(algos.begin(), algos.end(), Algo::fsa) != algos.end();
    const bool wants_fsap = std::find(algos.begin(), algos.end(), Algo::fsap) != algos.end();
    baselines::CombPattern fsa;
    baselines::CombPattern fsap;
    if (wants_fsa) fsa = baselines::fsa_pattern(base.users, base.subcarriers);
    if (wants_fsap) fsap = baselines::fsap_pattern(base);

    std::vector<std::vector<TrialOutcome>> per_trial(
        static_cast<std::size_t>(spec.trials),
        std::vector<TrialOutcome>(algos.size()));

    parallel_trials(spec.trials, worker_count(spec), [&](int t) {
        const auto real = trial_realization(spec, t);
        const std::vector<double> gap{spec.snr_gap};
        auto cnr = channel::to_cnr(real, gap, snr_db);
        SystemConfig cfg = base;
        cfg.total_power = cnr.total_power;
        for (std::size_t a = 0; a < algos.size(); ++a) {
            Allocation alloc;
            switch (algos[a]) {
                case Algo::fsa:
                    alloc = baselines::allocate_fixed(cfg, cnr.cnr.alpha, fsa, SolverId::fsa);
                    break;
                case Algo::fsap:
                    alloc = baselines::allocate_fixed(cfg, cnr.cnr.alpha, fsap, SolverId::fsap);
                    break;
                default:
                    alloc = run_algo(algos[a], cfg, cnr.cnr.alpha, spec, t);
                    break;
            }
            per_trial[static_cast<std::size_t>(t)][a] = outcome_of(alloc);
        }
    });

    std::vector<AlgoStats> stats(algos.size());
    for (int t = 0; t < spec.trials; ++t)
        for (std::size_t a = 0; a < algos.size(); ++a)
            stats[a].add(per_trial[static_cast<std::size_t>(t)][a]);
    return stats;
}

}  // namespace

const char* const kCsvHeader =
    "experiment,algo,snr_db,rdc,dc_users,subcarriers,ndc_users,outage_prob,outage_ci_lo,"
    "outage_ci_hi,avg_ndc_rate,avg_iterations,trials_used";

const char* algo_name(Algo a) noexcept {
    switch (a) {
        case Algo::optimal_ts: return "optimal_ts";
        case Algo::dual: return "dual";
        case Algo::greedy: return "greedy";
        case Algo::fsa: return "fsa";
        case Algo::fsap: return "fsap";
    }
    return "unknown";
}

Algo algo_from_name(const std::string& name) {
    if (name == "optimal_ts") return Algo::optimal_ts;
    if (name == "dual") return Algo::dual;
    if (name == "greedy") return Algo::greedy;
    if (name == "fsa") return Algo::fsa;
    if (name == "fsap") return Algo::fsap;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_csv(std::span<const ResultRow> rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.experiment << ',' << r.algo << ',' << fmt(r.snr_db) << ',' << fmt(r.rdc) << ','
            << r.dc_users << ',' << r.subcarriers << ',' << r.ndc_users << ','
            << fmt(r.outage_prob) << ',' << fmt(r.outage_ci_lo) << ',' << fmt(r.outage_ci_hi)
            << ',' << fmt(r.avg_ndc_rate) << ',' << fmt(r.avg_iterations) << ','
            << r.trials_used << '\n';
    }
    return out.str();
}

void write_csv(std::ostream& out, std::span<const ResultRow> rows) { out << to_csv(rows); }

WilsonInterval wilson_interval(int successes, int trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

channel::ChannelRealization trial_realization(const ExperimentSpec& spec, int trial) {
    return channel::draw_realization(spec.model, spec.cfg.users, spec.cfg.subcarriers,
                                     rng::derive(spec.seed, static_cast<std::uint64_t>(trial),
                                                 kChannelTag));
}

Allocation run_algo(Algo algo, const SystemConfig& cfg, const Matrix<double>& alpha,
                    const ExperimentSpec& spec, int trial) {
    switch (algo) {
        case Algo::optimal_ts:
            return ts::outer_solve(cfg, alpha, spec.solver);
        case Algo::dual:
            return dual::solve_dual(cfg, alpha, spec.dual_settings);
        case Algo::greedy:
            return greedy::solve(cfg, alpha);
        case Algo::fsa:
            return baselines::allocate_fixed(cfg, alpha,
                                             baselines::fsa_pattern(cfg.users, cfg.subcarriers),
                                             SolverId::fsa);
        case Algo::fsap:
            return baselines::allocate_fixed(cfg, alpha, baselines::fsap_pattern(cfg),
                                             SolverId::fsap);
    }
    (void)trial;
    throw std::invalid_argument("run_algo: unknown algorithm");
}

std::vector<ResultRow> run_outage_sweep(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("run_outage_sweep: trials must be >= 1");
    if (spec.snr_grid_db.empty())
        throw std::invalid_argument("run_outage_sweep: SNR grid must not be empty");
    const double rdc = spec.rdc_grid.empty()
                           ? [&] {
                                 double sum = 0.0;
                                 for (double r : spec.cfg.dc_rates) sum += r;
                                 return sum;
                             }()
                           : spec.rdc_grid.front();

    std::vector<ResultRow> rows;
    for (double snr : spec.snr_grid_db) {
        const auto stats = point_stats(spec, rdc, snr, spec.algos);
        const SystemConfig cfg = with_rates(spec.cfg, rdc);
        for (std::size_t a = 0; a < spec.algos.size(); ++a)
            rows.push_back(make_row("outage_sweep", spec.algos[a], cfg, snr, rdc, stats[a],
                                    spec.trials));
    }
    return rows;
}

std::vector<ResultRow> run_min_snr(const ExperimentSpec& spec, double target_outage) {
    if (!(target_outage > 0.0 && target_outage < 1.0))
        throw std::invalid_argument("run_min_snr: target outage must lie in (0, 1)");
    if (spec.rdc_grid.empty())
        throw std::invalid_argument("run_min_snr: rdc grid must not be empty");

    constexpr double kSnrLo = 0.0;
    constexpr double kSnrHi = 60.0;
    constexpr double kResolution = 0.1;

    std::vector<ResultRow> rows;
    for (double rdc : spec.rdc_grid) {
        for (Algo algo : spec.algos) {
            const std::vector<Algo> one{algo};
            auto outage_at = [&](double snr) {
                return static_cast<double>(point_stats(spec, rdc, snr, one)[0].outages) /
                       spec.trials;
            };

            const SystemConfig cfg = with_rates(spec.cfg, rdc);
            double found = std::numeric_limits<double>::quiet_NaN();
            if (outage_at(kSnrHi) > target_outage) {
                // unreachable within the cap; flag the row
                const auto stats = point_stats(spec, rdc, kSnrHi, one);
                ResultRow row = make_row("min_snr", algo, cfg, found, rdc, stats[0], spec.trials);
                rows.push_back(row);
                continue;
            }
            double lo = kSnrLo;
            double hi = kSnrHi;
            if (outage_at(kSnrLo) <= target_outage) {
                found = kSnrLo;
            } else {
                while (hi - lo > kResolution) {
                    const double mid = 0.5 * (lo + hi);
                    if (outage_at(mid) <= target_outage)
                        hi = mid;
                    else
                        lo = mid;
                }
                found = hi;
            }
            const auto stats = point_stats(spec, rdc, found, one);
            rows.push_back(make_row("min_snr", algo, cfg, found, rdc, stats[0], spec.trials));
        }
    }
    return rows;
}

std::vector<ResultRow> run_rate_region(const ExperimentSpec& spec) {
    if (spec.rdc_grid.empty())
        throw std::invalid_argument("run_rate_region: rdc grid must not be empty");
    const double snr = spec.snr_grid_db.empty() ? 20.0 : spec.snr_grid_db.front();

    std::vector<ResultRow> rows;
    for (double rdc : spec.rdc_grid) {
        std::vector<Algo> algos;
        for (Algo a : spec.algos) {
            const auto cap = spec.rdc_caps.find(a);
            if (cap == spec.rdc_caps.end() || rdc <= cap->second) algos.push_back(a);
        }
        if (algos.empty()) continue;
        const auto stats = point_stats(spec, rdc, snr, algos);
        const SystemConfig cfg = with_rates(spec.cfg, rdc);
        for (std::size_t a = 0; a < algos.size(); ++a)
            rows.push_back(make_row("rate_region", algos[a], cfg, snr, rdc, stats[a],
                                    spec.trials));
    }
    return rows;
}

std::vector<ResultRow> run_diversity(const ExperimentSpec& spec) {
    if (spec.ndc_grid.empty())
        throw std::invalid_argument("run_diversity: ndc grid must not be empty");
    const double snr = spec.snr_grid_db.empty() ? 20.0 : spec.snr_grid_db.front();
    const int dc = spec.cfg.dc_users;
    if (dc < 1) throw std::invalid_argument("run_diversity: needs DC users");
    const double rdc = spec.rdc_grid.empty()
                           ? [&] {
                                 double sum = 0.0;
                                 for (double r : spec.cfg.dc_rates) sum += r;
                                 return sum;
                             }()
                           : spec.rdc_grid.front();

    const int max_ndc = *std::max_element(spec.ndc_grid.begin(), spec.ndc_grid.end());
    for (int v : spec.ndc_grid)
        if (v < 1) throw std::invalid_argument("run_diversity: NDC counts must be >= 1");

    // The fixed combs keep the canonical DC layout (a 2*K1-user comb) and
    // hand every NDC slot to one user, round-robin across trials.
    SystemConfig comb_cfg = spec.cfg;
    comb_cfg.users = 2 * dc;
    comb_cfg.dc_users = dc;
    comb_cfg = with_rates(comb_cfg, rdc);
    comb_cfg.total_power = 1.0;
    const bool wants_fsa = std::find(spec.algos.begin(), spec.algos.end(), Algo::fsa) !=
                           spec.algos.end();
    const bool wants_fsap = std::find(spec.algos.begin(), spec.algos.end(), Algo::fsap) !=
                            spec.algos.end();
    baselines::CombPattern fsa_base;
    baselines::CombPattern fsap_base;
    if (wants_fsa) fsa_base = baselines::fsa_pattern(comb_cfg.users, comb_cfg.subcarriers);
    if (wants_fsap) fsap_base = baselines::fsap_pattern(comb_cfg);

    // One nested draw per trial: grid point with V NDC users sees rows
    // [0, dc + V) of the same realization, so adding users can only help.
    ExperimentSpec big = spec;
    big.cfg.users = dc + max_ndc;
    big.cfg.dc_users = dc;

    std::vector<std::vector<std::vector<TrialOutcome>>> results(
        spec.ndc_grid.size(),
        std::vector<std::vector<TrialOutcome>>(spec.algos.size(),
                                               std::vector<TrialOutcome>(
                                                   static_cast<std::size_t>(spec.trials))));

    parallel_trials(spec.trials, worker_count(spec), [&](int t) {
        const auto real_full = trial_realization(big, t);
        const std::vector<double> gap{spec.snr_gap};
        for (std::size_t gi = 0; gi < spec.ndc_grid.size(); ++gi) {
            const int ndc = spec.ndc_grid[gi];
            channel::ChannelRealization real;
            real.users = dc + ndc;
            real.subcarriers = real_full.subcarriers;
            real.seed = real_full.seed;
            real.freq_response = Matrix<std::complex<double>>(
                static_cast<std::size_t>(real.users),
                static_cast<std::size_t>(real.subcarriers));
            for (int k = 0; k < real.users; ++k)
                for (int c = 0; c < real.subcarriers; ++c)
                    real.freq_response(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) =
                        real_full.freq_response(static_cast<std::size_t>(k),
                                                static_cast<std::size_t>(c));

            auto cnr = channel::to_cnr(real, gap, snr);
            SystemConfig cfg = spec.cfg;
            cfg.users = dc + ndc;
            cfg.dc_users = dc;
            cfg = with_rates(cfg, rdc);
            cfg.total_power = cnr.total_power;

            const int rr_user = dc + (t % ndc);
            for (std::size_t a = 0; a < spec.algos.size(); ++a) {
                Allocation alloc;
                switch (spec.algos[a]) {
                    case Algo::fsa:
                        alloc = baselines::allocate_fixed(
                            cfg, cnr.cnr.alpha, baselines::collapse_ndc(fsa_base, dc, rr_user),
                            SolverId::fsa);
                        break;
                    case Algo::fsap:
                        alloc = baselines::allocate_fixed(
                            cfg, cnr.cnr.alpha, baselines::collapse_ndc(fsap_base, dc, rr_user),
                            SolverId::fsap);
                        break;
                    default:
                        alloc = run_algo(spec.algos[a], cfg, cnr.cnr.alpha, spec, t);
                        break;
                }
                results[gi][a][static_cast<std::size_t>(t)] = outcome_of(alloc);
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t gi = 0; gi < spec.ndc_grid.size(); ++gi) {
        const int ndc = spec.ndc_grid[gi];
        SystemConfig cfg = spec.cfg;
        cfg.users = dc + ndc;
        cfg.dc_users = dc;
        cfg = with_rates(cfg, rdc);
        for (std::size_t a = 0; a < spec.algos.size(); ++a) {
            AlgoStats st;
            for (int t = 0; t < spec.trials; ++t)
                st.add(results[gi][a][static_cast<std::size_t>(t)]);
            rows.push_back(
                make_row("diversity", spec.algos[a], cfg, snr, rdc, st, spec.trials));
        }
    }
    return rows;
}

std::vector<ResultRow> run_convergence(const ExperimentSpec& spec,
                                       std::vector<ConvergenceCell>* cells) {
    std::vector<int> dc_grid;
    for (int k1 = 1; k1 <= 12; ++k1) dc_grid.push_back(k1);
    const std::vector<int> n_grid{16, 32, 64, 128};
    const int realizations = std::max(1, spec.trials);

    ts::SolverSettings settings = spec.solver;
    settings.full_search_on_outage = true;

    std::vector<ResultRow> rows;
    if (cells) cells->clear();

    for (int n : n_grid) {
        for (int k1 : dc_grid) {
            SystemConfig cfg;
            cfg.users = k1 + 2;  // two NDC users
            cfg.dc_users = k1;
            cfg.subcarriers = n;
            cfg.total_power = 100.0;
            cfg.dc_rates.assign(static_cast<std::size_t>(k1), 16.0);

            std::vector<IterationCounts> counts(static_cast<std::size_t>(realizations));
            std::vector<char> outage(static_cast<std::size_t>(realizations), 0);
            const std::uint64_t cell_seed = rng::derive(
                spec.seed, kIidTag, static_cast<std::uint64_t>(k1) * 1024u +
                                        static_cast<std::uint64_t>(n));
            parallel_trials(realizations, worker_count(spec), [&](int t) {
                // iid unit-variance complex Gaussians, alpha = N |h|^2
                Matrix<double> alpha(static_cast<std::size_t>(cfg.users),
                                     static_cast<std::size_t>(n));
                for (int k = 0; k < cfg.users; ++k) {
                    rng::Stream stream(cell_seed, static_cast<std::uint64_t>(t),
                                       static_cast<std::uint64_t>(k));
                    for (int c = 0; c < n; ++c)
                        alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) =
                            static_cast<double>(n) * std::norm(stream.next_cnormal(1.0));
                }
                const Allocation a = ts::outer_solve(cfg, alpha, settings);
                counts[static_cast<std::size_t>(t)] = a.report.iterations;
                outage[static_cast<std::size_t>(t)] = a.report.outage ? 1 : 0;
            });

            ConvergenceCell cell;
            cell.dc_users = k1;
            cell.subcarriers = n;
            int outages = 0;
            for (int t = 0; t < realizations; ++t) {
                cell.avg_outer += counts[static_cast<std::size_t>(t)].outer;
                cell.avg_doublings += counts[static_cast<std::size_t>(t)].doublings;
                cell.avg_inner_total += counts[static_cast<std::size_t>(t)].inner;
                cell.avg_inner_bisection += counts[static_cast<std::size_t>(t)].inner_bisection;
                outages += outage[static_cast<std::size_t>(t)];
            }
            cell.avg_outer /= realizations;
            cell.avg_doublings /= realizations;
            cell.avg_inner_total /= realizations;
            cell.avg_inner_bisection /= realizations;
            cell.outage_fraction = static_cast<double>(outages) / realizations;
            if (cells) cells->push_back(cell);

            AlgoStats st;
            st.outages = outages;
            st.served = realizations - outages;
            st.iter_sum = cell.avg_inner_total * realizations;
            ResultRow row = make_row("convergence", Algo::optimal_ts, cfg, 20.0,
                                     16.0 * k1, st, realizations);
            row.avg_ndc_rate = 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

SolveOneResult solve_one(const ExperimentSpec& spec, Algo algo,
                         const channel::ChannelRealization& real) {
    SolveOneResult out;
    out.algo = algo;
    const std::vector<double> gap{spec.snr_gap};
    const double snr = spec.snr_grid_db.empty() ? 20.0 : spec.snr_grid_db.front();
    auto cnr = channel::to_cnr(real, gap, snr);

    out.cfg = spec.cfg;
    out.cfg.users = real.users;
    out.cfg.subcarriers = real.subcarriers;
    if (!spec.rdc_grid.empty()) out.cfg = with_rates(out.cfg, spec.rdc_grid.front());
    out.cfg.total_power = cnr.total_power;
    out.cfg.validate();
    if (out.cfg.dc_users > real.users)
        throw std::invalid_argument("solve_one: more DC users than channel rows");

    out.allocation = run_algo(algo, out.cfg, cnr.cnr.alpha, spec, 0);
    return out;
}

}  // namespace ofdma::harness
