#pragma once

#include <cstdint>
#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::oracle {

struct OracleResult {
    std::vector<int> best_assignment;  // owner per subcarrier
    double best_ndc_sum_rate = 0.0;
    bool feasible = false;
    std::int64_t enumerated = 0;
};

/// Exhaustive search over exclusive assignments, ground truth for small
/// instances. With restrict_candidates the per-subcarrier pool is the DC
/// users plus the best-CNR NDC user ((K1+1)^N assignments instead of K^N).
/// Refuses instances whose enumeration would exceed `guard` assignments.
OracleResult exhaustive_solve(const SystemConfig& cfg, const Matrix<double>& alpha,
                              bool restrict_candidates = true,
                              std::int64_t guard = 10'000'000);

/// Exact allocation for the oracle's winning assignment.
Allocation recover(const SystemConfig& cfg, const Matrix<double>& alpha,
                   const OracleResult& result);

}  // namespace ofdma::oracle
