#pragma once

#include <span>
#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::ts {

struct SolverSettings {
    double epsilon = 1e-7;      // bisection accuracy; update count is ceil(log2(4/epsilon))
    double delta = 0.005;       // takeover margin in the inner claim step
    double delta_init = 1e-9;   // relative offset of the initial NDC level below min(1/alpha)
    int max_outer = 200;        // cap on bracket doubling steps
    int max_inner = 100000;     // cap on inner passes per level evaluation
    // Convergence-study mode: run the full bisection even when the initial
    // level already over-consumes the budget (the bracket degenerates and the
    // iteration counters keep accumulating). Normal solves abort on outage.
    bool full_search_on_outage = false;
};

/// Per-(user, subcarrier) occupancy score; the user with the largest score
/// owns the subcarrier under optimal time sharing. `level` is the user's own
/// water level (the common NDC level for best-effort users).
double occupancy_score(double alpha, double level, double ndc_level);

/// Exclusive assignment by score. Competitors on each subcarrier are the DC
/// users plus the single best-CNR NDC user; ties go to the lowest user index
/// with DC before NDC, and an all-zero column goes to the best-CNR NDC user
/// (it carries no power either way).
SharingMatrix assign_by_score(const Matrix<double>& alpha, int dc_users,
                              std::span<const double> dc_levels, double ndc_level);

struct WaterLevelState {
    double ndc_level = 0.0;
    std::vector<double> dc_levels;
    SharingMatrix rho;
    double consumed_power = 0.0;   // P_T' recomputed from the levels and rho
    std::vector<double> dc_rates;  // R_k' at exit
    int passes = 0;                // deficit-repair passes used
};

/// Finds the DC water levels and sharing factors meeting every DC rate
/// target at a fixed NDC level. Throws NonConvergenceError past max_inner.
WaterLevelState inner_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                            double ndc_level, const SolverSettings& settings = {});

/// Full time-sharing solver: brackets the NDC level by doubling, runs a
/// fixed ceil(log2(4/epsilon)) bisection updates, then re-balances power
/// exactly on the final sharing factors. Outage is declared when the DC
/// users alone over-consume the budget at the initial NDC level.
Allocation outer_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                       const SolverSettings& settings = {});

/// Number of bisection updates performed for a given accuracy (26 at 1e-7).
int bisection_updates(double epsilon);

}  // namespace ofdma::ts
