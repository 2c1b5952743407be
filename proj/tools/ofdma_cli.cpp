// Command-line front end: Monte Carlo experiment runners emitting CSV plot
// data, plus a one-shot solver for channels stored as CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ofdma/channel.hpp"
#include "ofdma/harness.hpp"

namespace {

using ofdma::harness::Algo;
using ofdma::harness::ExperimentSpec;
using ofdma::harness::ResultRow;

constexpr int kExitInvalidArguments = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOptions {
    int subcarriers = 64;
    int users = 8;
    int dc_users = 4;
    std::vector<double> rdc{80.0};
    std::vector<double> snr{16.0};
    int trials = 500;
    std::uint64_t seed = 1;
    std::vector<std::string> algos;
    std::string out_path;
    double gamma = 6.6;
    double epsilon = 1e-7;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--n", opt.subcarriers, "Number of subcarriers")->check(CLI::PositiveNumber);
    cmd->add_option("--users", opt.users, "Total number of users")->check(CLI::PositiveNumber);
    cmd->add_option("--dc-users", opt.dc_users, "Number of delay-constrained users")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--rdc", opt.rdc, "Total DC rate(s), bits/OFDM symbol (split equally)");
    cmd->add_option("--snr", opt.snr, "Total transmit SNR grid in dB");
    cmd->add_option("--trials", opt.trials, "Channel realizations per point")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "Master seed");
    cmd->add_option("--algos", opt.algos,
                    "Algorithms: optimal_ts, dual, greedy, fsa, fsap");
    cmd->add_option("--out", opt.out_path, "Output file (stdout when omitted)");
    cmd->add_option("--gamma", opt.gamma, "SNR gap (linear)")->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", opt.epsilon, "Bisection accuracy of the optimal solver")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", opt.threads, "Worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
}

ExperimentSpec to_spec(const CommonOptions& opt) {
    ExperimentSpec spec;
    spec.cfg.users = opt.users;
    spec.cfg.dc_users = opt.dc_users;
    spec.cfg.subcarriers = opt.subcarriers;
    spec.cfg.total_power = 1.0;  // set per SNR point
    spec.cfg.dc_rates.assign(static_cast<std::size_t>(opt.dc_users),
                             opt.dc_users > 0 ? opt.rdc.front() / opt.dc_users : 0.0);
    spec.snr_gap = opt.gamma;
    spec.snr_grid_db = opt.snr;
    spec.rdc_grid = opt.rdc;
    spec.trials = opt.trials;
    spec.seed = opt.seed;
    spec.solver.epsilon = opt.epsilon;
    spec.threads = opt.threads;
    if (!opt.algos.empty()) {
        spec.algos.clear();
        for (const auto& name : opt.algos)
            spec.algos.push_back(ofdma::harness::algo_from_name(name));
    }
    return spec;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

void emit_rows(const std::string& path, const std::vector<ResultRow>& rows) {
    emit(path, ofdma::harness::to_csv(rows));
}

nlohmann::json allocation_to_json(const ofdma::harness::SolveOneResult& result) {
    const auto& alloc = result.allocation;
    nlohmann::json j;
    j["config"] = {{"users", result.cfg.users},
                   {"dc_users", result.cfg.dc_users},
                   {"subcarriers", result.cfg.subcarriers},
                   {"total_power", result.cfg.total_power},
                   {"dc_rates", result.cfg.dc_rates}};
    j["algo"] = ofdma::harness::algo_name(result.algo);
    j["outage"] = alloc.report.outage;
    j["converged"] = alloc.report.converged;
    j["water_levels"] = {{"dc", alloc.power.dc_levels}, {"ndc", alloc.power.ndc_level}};
    j["dc_power_total"] = alloc.power.dc_power_total;
    j["rates"] = alloc.report.rates;
    j["ndc_sum_rate"] = alloc.report.ndc_sum_rate;
    j["iterations"] = {{"outer", alloc.report.iterations.outer},
                       {"inner", alloc.report.iterations.inner},
                       {"doublings", alloc.report.iterations.doublings}};

    auto matrix_to_json = [](const ofdma::Matrix<double>& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["rho"] = matrix_to_json(alloc.rho.rho);
    j["actual_power"] = matrix_to_json(alloc.power.actual_power);
    j["conditional_power"] = matrix_to_json(alloc.power.conditional_power);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subcarrier and power allocation for mixed guaranteed-rate and "
                 "best-effort OFDMA traffic"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Options file (INI/TOML, [subcommand] sections; flags win)");

    CommonOptions opt;

    auto* outage = app.add_subcommand("outage", "Service outage probability vs transmit SNR");
    add_common(outage, opt);

    auto* min_snr = app.add_subcommand("min-snr", "Minimum SNR reaching a target outage");
    add_common(min_snr, opt);
    double target_outage = 0.01;
    min_snr->add_option("--target-outage", target_outage, "Outage target in (0,1)")
        ->check(CLI::Range(1e-9, 0.999999));

    auto* rate_region = app.add_subcommand("rate-region",
                                           "Average NDC sum-rate vs total DC rate at fixed SNR");
    add_common(rate_region, opt);
    bool no_caps = false;
    rate_region->add_flag("--no-caps", no_caps, "Disable the per-algorithm DC-rate caps");

    auto* diversity = app.add_subcommand("diversity",
                                         "Average NDC sum-rate vs number of NDC users");
    add_common(diversity, opt);
    std::vector<int> ndc_grid{4, 8, 12, 16};
    diversity->add_option("--ndc", ndc_grid, "NDC user counts");

    auto* convergence = app.add_subcommand("convergence",
                                           "Iteration-count study of the optimal solver");
    add_common(convergence, opt);

    auto* solve = app.add_subcommand("solve", "Solve one channel instance from CSV");
    add_common(solve, opt);
    std::string channel_path;
    std::string algo_name = "optimal_ts";
    solve->add_option("--channel", channel_path, "Channel CSV (user,subcarrier,re,im)")
        ->required();
    solve->add_option("--algo", algo_name, "Algorithm to run");

    auto* channel_cmd = app.add_subcommand("channel", "Draw a channel realization to CSV");
    add_common(channel_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidArguments;
    }

    try {
        const ExperimentSpec spec = to_spec(opt);
        if (outage->parsed()) {
            emit_rows(opt.out_path, ofdma::harness::run_outage_sweep(spec));
        } else if (min_snr->parsed()) {
            emit_rows(opt.out_path, ofdma::harness::run_min_snr(spec, target_outage));
        } else if (rate_region->parsed()) {
            ExperimentSpec rr = spec;
            if (no_caps) rr.rdc_caps.clear();
            emit_rows(opt.out_path, ofdma::harness::run_rate_region(rr));
        } else if (diversity->parsed()) {
            ExperimentSpec dv = spec;
            dv.ndc_grid = ndc_grid;
            emit_rows(opt.out_path, ofdma::harness::run_diversity(dv));
        } else if (convergence->parsed()) {
            ExperimentSpec cv = spec;
            if (cv.trials > 100) cv.trials = 20;  // realizations per grid cell
            emit_rows(opt.out_path, ofdma::harness::run_convergence(cv));
        } else if (solve->parsed()) {
            std::ifstream in(channel_path);
            if (!in) {
                std::cerr << "error: cannot open channel file '" << channel_path << "'\n";
                return kExitInvalidArguments;
            }
            const auto real = ofdma::channel::load_csv(in);
            const auto result = ofdma::harness::solve_one(
                spec, ofdma::harness::algo_from_name(algo_name), real);
            emit(opt.out_path, allocation_to_json(result).dump(2) + "\n");
        } else if (channel_cmd->parsed()) {
            const auto real = ofdma::channel::draw_realization(
                spec.model, spec.cfg.users, spec.cfg.subcarriers, spec.seed);
            std::ostringstream out;
            ofdma::channel::dump_csv(real, out);
            emit(opt.out_path, out.str());
        }
    } catch (const ofdma::NonConvergenceError& e) {
        std::cerr << "error: solver failed to converge: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const ofdma::CsvParseError& e) {
        std::cerr << "error: channel CSV: " << e.what() << "\n";
        return kExitInvalidArguments;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidArguments;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
