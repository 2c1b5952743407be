#pragma once

#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::baselines {

struct CombPattern {
    std::vector<int> assignment;  // owner per subcarrier
    std::vector<int> counts;      // subcarriers per user
};

/// Equal comb: subcarrier n belongs to user n mod K. Requires K | N.
CombPattern fsa_pattern(int users, int subcarriers);

/// Priority comb: each DC user appears three times per cycle, each NDC user
/// once (12 vs 4 subcarriers at K=8, K1=4, N=64). Cycle layout: one
/// DC/NDC interleaved round followed by two plain DC rounds, repeated across
/// the band. Requires the cycle length (3*K1 + K - K1) to divide N.
CombPattern fsap_pattern(const SystemConfig& cfg);

/// Reassigns every NDC-owned slot of a comb to one chosen NDC user
/// (the multiuser-diversity reference configuration).
CombPattern collapse_ndc(const CombPattern& base, int dc_users, int ndc_user);

/// Optimal power allocation on the fixed pattern.
Allocation allocate_fixed(const SystemConfig& cfg, const Matrix<double>& alpha,
                          const CombPattern& pattern, SolverId label = SolverId::fsa);

}  // namespace ofdma::baselines
