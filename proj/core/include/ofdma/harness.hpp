#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ofdma/channel.hpp"
#include "ofdma/dual.hpp"
#include "ofdma/optimal_ts.hpp"
#include "ofdma/types.hpp"

namespace ofdma::harness {

enum class Algo { optimal_ts, dual, greedy, fsa, fsap };

const char* algo_name(Algo a) noexcept;
Algo algo_from_name(const std::string& name);

struct ExperimentSpec {
    SystemConfig cfg;  // user counts, subcarriers; rates/power filled per grid point
    channel::ChannelModel model = channel::hiperlan2_model_a();
    double snr_gap = 6.6;
    std::vector<double> snr_grid_db;
    std::vector<double> rdc_grid;  // total DC rate, split equally across DC users
    std::vector<int> ndc_grid;     // diversity sweep
    int trials = 500;
    std::uint64_t seed = 1;
    std::vector<Algo> algos = {Algo::optimal_ts, Algo::dual, Algo::greedy, Algo::fsa, Algo::fsap};
    ts::SolverSettings solver;
    dual::DualSettings dual_settings;
    double target_outage = 0.01;
    int threads = 0;  // 0 = hardware concurrency
    // 1%-outage grid caps applied by run_rate_region (adaptive / fsap / fsa).
    std::map<Algo, double> rdc_caps = {{Algo::optimal_ts, 176.0},
                                       {Algo::dual, 176.0},
                                       {Algo::greedy, 176.0},
                                       {Algo::fsap, 112.0},
                                       {Algo::fsa, 80.0}};
};

struct ResultRow {
    std::string experiment;
    std::string algo;
    double snr_db = 0.0;
    double rdc = 0.0;
    int dc_users = 0;
    int subcarriers = 0;
    int ndc_users = 0;
    double outage_prob = 0.0;
    double outage_ci_lo = 0.0;
    double outage_ci_hi = 0.0;
    double avg_ndc_rate = 0.0;
    double avg_iterations = 0.0;
    int trials_used = 0;
};

extern const char* const kCsvHeader;
std::string to_csv(std::span<const ResultRow> rows);
void write_csv(std::ostream& out, std::span<const ResultRow> rows);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};
WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054);

/// Channel realization for one trial; every algorithm and every grid point of
/// an experiment sees the same per-trial draw (common random numbers).
channel::ChannelRealization trial_realization(const ExperimentSpec& spec, int trial);

/// Runs one algorithm on one CNR instance.
Allocation run_algo(Algo algo, const SystemConfig& cfg, const Matrix<double>& alpha,
                    const ExperimentSpec& spec, int trial);

/// Outage probability vs transmit SNR at a fixed total DC rate.
std::vector<ResultRow> run_outage_sweep(const ExperimentSpec& spec);

/// Minimum SNR reaching the target outage, bisected to 0.1 dB over [0, 60];
/// unreachable targets are flagged with snr_db = NaN.
std::vector<ResultRow> run_min_snr(const ExperimentSpec& spec, double target_outage);

/// Average NDC sum-rate (non-outage trials) vs the total DC rate at fixed SNR.
std::vector<ResultRow> run_rate_region(const ExperimentSpec& spec);

/// Average NDC sum-rate vs the number of NDC users; the fixed combs hand all
/// their NDC slots to one round-robin-selected user.
std::vector<ResultRow> run_diversity(const ExperimentSpec& spec);

struct ConvergenceCell {
    int dc_users = 0;
    int subcarriers = 0;
    double avg_outer = 0.0;
    double avg_doublings = 0.0;
    double avg_inner_total = 0.0;      // passes over the whole solve
    double avg_inner_bisection = 0.0;  // passes inside the bisection updates only
    double outage_fraction = 0.0;
};

/// Iteration-count study over a (DC users) x (subcarriers) grid with iid
/// Rayleigh CNRs, P_T = 100 and 16-bit targets; runs the full bisection even
/// on infeasible draws so every cell accumulates counts.
std::vector<ResultRow> run_convergence(const ExperimentSpec& spec,
                                       std::vector<ConvergenceCell>* cells = nullptr);

/// One-shot solve of a channel read from CSV.
struct SolveOneResult {
    SystemConfig cfg;
    Algo algo = Algo::optimal_ts;
    Allocation allocation;
};
SolveOneResult solve_one(const ExperimentSpec& spec, Algo algo,
                         const channel::ChannelRealization& real);

}  // namespace ofdma::harness
