#include "ofdma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ofdma/rng.hpp"

namespace ofdma::channel {

ChannelModel build_model(int tap_count, double sample_period, double rms_delay_spread) {
    if (tap_count < 1) throw std::invalid_argument("build_model: tap_count must be >= 1");
    if (!(sample_period > 0.0) || !(rms_delay_spread > 0.0))
        throw std::invalid_argument("build_model: time parameters must be > 0");

    ChannelModel model;
    model.tap_count = tap_count;
    model.sample_period = sample_period;
    model.rms_delay_spread = rms_delay_spread;
    model.tap_powers.resize(static_cast<std::size_t>(tap_count));
    double sum = 0.0;
    for (int l = 0; l < tap_count; ++l) {
        const double p = std::exp(-static_cast<double>(l) * sample_period / rms_delay_spread);
        model.tap_powers[static_cast<std::size_t>(l)] = p;
        sum += p;
    }
    for (double& p : model.tap_powers) p /= sum;
    return model;
}

ChannelModel hiperlan2_model_a() { return build_model(8, 50e-9, 50e-9); }

ChannelRealization draw_realization(const ChannelModel& model, int users, int subcarriers,
                                    std::uint64_t seed) {
    if (users < 1) throw std::invalid_argument("draw_realization: users must be >= 1");
    if (subcarriers < model.tap_count)
        throw std::invalid_argument("draw_realization: subcarriers must be >= tap_count");

    const int n_taps = model.tap_count;
    const int n = subcarriers;

    ChannelRealization real;
    real.users = users;
    real.subcarriers = n;
    real.seed = seed;
    real.freq_response = Matrix<std::complex<double>>(static_cast<std::size_t>(users),
                                                      static_cast<std::size_t>(n));

    std::vector<std::complex<double>> taps(static_cast<std::size_t>(n_taps));
    for (int k = 0; k < users; ++k) {
        rng::Stream stream(seed, static_cast<std::uint64_t>(k));
        for (int l = 0; l < n_taps; ++l)
            taps[static_cast<std::size_t>(l)] =
                stream.next_cnormal(model.tap_powers[static_cast<std::size_t>(l)]);

        for (int c = 0; c < n; ++c) {
            std::complex<double> h{0.0, 0.0};
            for (int l = 0; l < n_taps; ++l) {
                const double phase =
                    -2.0 * std::numbers::pi * static_cast<double>(c) * static_cast<double>(l) /
                    static_cast<double>(n);
                h += taps[static_cast<std::size_t>(l)] *
                     std::complex<double>{std::cos(phase), std::sin(phase)};
            }
            real.freq_response(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) = h;
        }
    }
    return real;
}

CnrResult to_cnr(const ChannelRealization& real, std::span<const double> snr_gap,
                 double total_snr_db) {
    const int users = real.users;
    const int n = real.subcarriers;
    if (snr_gap.empty() ||
        (snr_gap.size() != 1 && snr_gap.size() != static_cast<std::size_t>(users)))
        throw std::invalid_argument("to_cnr: snr_gap must have one entry or one per user");
    for (double g : snr_gap)
        if (!(g >= 1.0)) throw std::invalid_argument("to_cnr: SNR gap entries must be >= 1");

    CnrResult out;
    out.total_power = std::pow(10.0, total_snr_db / 10.0);
    out.cnr.noise_total = 1.0;
    out.cnr.snr_gap.assign(static_cast<std::size_t>(users),
                           snr_gap.size() == 1 ? snr_gap[0] : 0.0);
    if (snr_gap.size() != 1)
        out.cnr.snr_gap.assign(snr_gap.begin(), snr_gap.end());

    out.cnr.alpha = Matrix<double>(static_cast<std::size_t>(users), static_cast<std::size_t>(n));
    for (int k = 0; k < users; ++k) {
        const double gamma = out.cnr.snr_gap[static_cast<std::size_t>(k)];
        for (int c = 0; c < n; ++c) {
            const auto h = real.freq_response(static_cast<std::size_t>(k),
                                              static_cast<std::size_t>(c));
            // alpha = |h|^2 / (Gamma * N0B / N) with N0B = 1
            out.cnr.alpha(static_cast<std::size_t>(k), static_cast<std::size_t>(c)) =
                std::norm(h) * static_cast<double>(n) / gamma;
        }
    }
    return out;
}

void dump_csv(const ChannelRealization& real, std::ostream& out) {
    out << "user,subcarrier,re,im\n";
    char buf[128];
    for (int k = 0; k < real.users; ++k) {
        for (int c = 0; c < real.subcarriers; ++c) {
            const auto h = real.freq_response(static_cast<std::size_t>(k),
                                              static_cast<std::size_t>(c));
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", k, c, h.real(), h.imag());
            out << buf;
        }
    }
}

ChannelRealization load_csv(std::istream& in) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw CsvParseError(1, "empty channel file");
    ++line_no;
    // tolerate trailing carriage returns from foreign line endings
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line != "user,subcarrier,re,im")
        throw CsvParseError(line_no, "expected header 'user,subcarrier,re,im'");

    std::map<std::pair<int, int>, std::complex<double>> cells;
    int max_user = -1;
    int max_sub = -1;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;

        int user = 0;
        int sub = 0;
        double re = 0.0;
        double im = 0.0;
        char trailing = '\0';
        const int got =
            std::sscanf(line.c_str(), "%d,%d,%lf,%lf%c", &user, &sub, &re, &im, &trailing);
        if (got < 4 || (got == 5 && trailing != '\0'))
            throw CsvParseError(line_no, "malformed row '" + line + "'");
        if (user < 0 || sub < 0) throw CsvParseError(line_no, "negative user or subcarrier index");
        if (!cells.emplace(std::make_pair(user, sub), std::complex<double>{re, im}).second)
            throw CsvParseError(line_no, "duplicate (user, subcarrier) entry");
        max_user = std::max(max_user, user);
        max_sub = std::max(max_sub, sub);
    }
    if (cells.empty()) throw CsvParseError(line_no, "no channel rows");

    const int users = max_user + 1;
    const int subs = max_sub + 1;
    if (cells.size() != static_cast<std::size_t>(users) * static_cast<std::size_t>(subs))
        throw CsvParseError(line_no, "incomplete (user, subcarrier) grid");

    ChannelRealization real;
    real.users = users;
    real.subcarriers = subs;
    real.freq_response =
        Matrix<std::complex<double>>(static_cast<std::size_t>(users), static_cast<std::size_t>(subs));
    for (const auto& [key, value] : cells)
        real.freq_response(static_cast<std::size_t>(key.first),
                           static_cast<std::size_t>(key.second)) = value;
    return real;
}

}  // namespace ofdma::channel
