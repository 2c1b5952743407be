#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ofdma/matrix.hpp"
#include "ofdma/types.hpp"

namespace ofdma::channel {

/// Tapped-delay-line model with an exponential power delay profile.
/// Taps are spaced one sample period apart and normalized so the average
/// per-subcarrier gain is one.
struct ChannelModel {
    int tap_count = 0;
    double sample_period = 0.0;      // seconds
    double rms_delay_spread = 0.0;   // seconds
    std::vector<double> tap_powers;  // sums to 1
};

ChannelModel build_model(int tap_count, double sample_period, double rms_delay_spread);

/// HiperLan/2 model A: 8 taps, 20 MHz sampling (50 ns spacing), 50 ns rms delay spread.
ChannelModel hiperlan2_model_a();

struct ChannelRealization {
    int users = 0;
    int subcarriers = 0;
    Matrix<std::complex<double>> freq_response;  // h[k][n]
    std::uint64_t seed = 0;
};

/// Draws one frequency-selective Rayleigh realization per user. Tap l of
/// user k is CN(0, tap_powers[l]) from substream (seed, k); the frequency
/// response is the N-point DFT of the zero-padded taps. Deterministic for
/// a fixed seed.
ChannelRealization draw_realization(const ChannelModel& model, int users, int subcarriers,
                                    std::uint64_t seed);

struct CnrMatrix {
    Matrix<double> alpha;          // effective CNR, alpha[k][n] > 0
    std::vector<double> snr_gap;   // per user, linear
    double noise_total = 1.0;      // N0*B, normalized to 1
};

struct CnrResult {
    CnrMatrix cnr;
    double total_power = 0.0;  // P_T = 10^(total_snr_db/10) with N0*B = 1
};

/// snr_gap holds either one entry (applied to every user) or one per user.
CnrResult to_cnr(const ChannelRealization& real, std::span<const double> snr_gap,
                 double total_snr_db);

/// CSV interchange: header `user,subcarrier,re,im`, 17 significant digits
/// (doubles round-trip exactly).
void dump_csv(const ChannelRealization& real, std::ostream& out);
ChannelRealization load_csv(std::istream& in);

}  // namespace ofdma::channel
