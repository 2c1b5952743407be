#pragma once

#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::greedy {

struct GreedyState {
    std::vector<std::vector<int>> dc_sets;  // pairwise-disjoint subcarrier sets per DC user
    std::vector<int> available;             // residual subcarriers, ascending
    std::vector<double> provisional_rates;  // equal-power rate credits
    int iterations = 0;                     // bounded by the subcarrier count
};

/// Deficit-driven subcarrier grabbing under the equal-power assumption:
/// the DC user farthest from its target takes its best remaining subcarrier
/// and is credited log2(1 + alpha * P_T / N) until all targets are
/// provisionally met or nothing remains.
GreedyState greedy_dc_assign(const SystemConfig& cfg, const Matrix<double>& alpha);

/// Per-user water-filling refinement over the grabbed sets, return of the
/// subcarriers the refinement leaves inactive, then best-CNR handover of the
/// residual set and power to the NDC users.
Allocation refine_and_handover(const SystemConfig& cfg, const Matrix<double>& alpha,
                               const GreedyState& state);

/// Convenience wrapper running both stages.
Allocation solve(const SystemConfig& cfg, const Matrix<double>& alpha);

}  // namespace ofdma::greedy
