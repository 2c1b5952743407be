#pragma once

#include <span>
#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::waterfill {

/// Rate-determined water level over a sorted-descending CNR span.
/// `active` is the largest prefix length g such that alpha[g-1] * level > 1;
/// the level over that prefix meets the rate target exactly.
struct DcLevel {
    double level = 0.0;
    int active = 0;
};

DcLevel dc_level_sorted(std::span<const double> sorted_cnrs, double rate_target);
DcLevel dc_level_sorted_weighted(std::span<const double> sorted_cnrs,
                                 std::span<const double> weights, double rate_target);

/// Public kernel: sorts internally, returns per-input powers (L - 1/alpha)^+.
struct DcWaterLevel {
    double level = 0.0;
    int active = 0;
    std::vector<double> powers;  // in input order
};

DcWaterLevel dc_water_level(std::span<const double> cnrs, double rate_target);

/// Power-determined common water level: sum of (L - 1/alpha)^+ over the
/// active prefix equals the residual power exactly.
struct NdcLevel {
    double level = 0.0;
    int active = 0;
};

NdcLevel ndc_level_sorted(std::span<const double> sorted_cnrs, double residual_power);
NdcLevel ndc_level_sorted_weighted(std::span<const double> sorted_cnrs,
                                   std::span<const double> weights, double residual_power);

struct NdcWaterLevel {
    double level = 0.0;
    std::vector<double> powers;  // in input order
};

NdcWaterLevel ndc_water_level(std::span<const double> cnrs, double residual_power);

/// Exact multi-level water-filling for a fixed (possibly fractional)
/// subcarrier assignment: one rate-determined level per DC user, one common
/// power-determined level for all NDC users. Outage (DC demand above the
/// power budget) is reported in-band, never thrown.
Allocation allocate_given_assignment(const SystemConfig& cfg, const Matrix<double>& alpha,
                                     const SharingMatrix& rho);

}  // namespace ofdma::waterfill
