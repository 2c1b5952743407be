#pragma once

#include <span>
#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::dual {

/// Multipliers of the exclusive-assignment problem: one beta per DC rate
/// constraint plus mu for the total power constraint.
struct DualPoint {
    std::vector<double> beta;
    double mu = 0.0;
};

struct SubcarrierMax {
    int winner = 0;
    double power = 0.0;
    double value = 0.0;
};

/// Per-subcarrier dual maximization over the K candidate users; the winner's
/// power is its water-filling power at the dual point. Throws on mu <= 0
/// (the dual is unbounded there).
SubcarrierMax per_subcarrier_max(std::span<const double> alpha_column, int dc_users,
                                 const DualPoint& point);

struct DualEvaluation {
    double g_value = 0.0;
    std::vector<int> winners;          // per subcarrier
    Matrix<double> powers;             // exclusive: one positive row per column
    std::vector<double> subgrad_beta;  // achieved rate minus target, per DC user
    double subgrad_mu = 0.0;           // budget minus consumed power
};

DualEvaluation eval_dual(const SystemConfig& cfg, const Matrix<double>& alpha,
                         const DualPoint& point);

/// Upper bounds on the optimal multipliers; the box [0,beta_max]^K1 x [0,mu_max]
/// always contains the dual optimum.
double mu_upper_bound(const SystemConfig& cfg, const Matrix<double>& alpha);
double beta_upper_bound(const SystemConfig& cfg, const Matrix<double>& alpha);

struct EllipsoidState {
    std::vector<double> center;  // (beta_1..beta_K1, mu)
    Matrix<double> shape;        // symmetric positive-definite
    int iteration = 0;
};

/// Initial ellipsoid enclosing the bound box (requires at least one DC user).
EllipsoidState initial_ellipsoid(const SystemConfig& cfg, const Matrix<double>& alpha);

struct DualSettings {
    double volume_tol = 1e-9;    // stop once the volume has shrunk by this factor
    int max_iterations = 0;      // 0 selects 500 * (K1+1)^2
    double mu_floor_rel = 1e-12; // evaluation clamp, relative to mu_max
};

/// Ellipsoid descent on the dual, then primal recovery: every evaluated
/// winner map is feasibility-checked and the best feasible one is re-solved
/// with exact water-filling. Outage when no evaluated map can support the
/// DC targets within the budget. `best_point`, when given, receives the
/// minimizing dual point (always inside the Lemma-1 box).
Allocation solve_dual(const SystemConfig& cfg, const Matrix<double>& alpha,
                      const DualSettings& settings = {}, DualPoint* best_point = nullptr);

}  // namespace ofdma::dual
