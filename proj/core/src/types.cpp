#include "ofdma/types.hpp"

#include <cmath>
#include <cstddef>

namespace ofdma {

void SystemConfig::validate() const {
    if (users < 1) throw std::invalid_argument("SystemConfig: users must be >= 1");
    if (dc_users < 0 || dc_users > users)
        throw std::invalid_argument("SystemConfig: dc_users must lie in [0, users]");
    if (subcarriers < 1) throw std::invalid_argument("SystemConfig: subcarriers must be >= 1");
    if (!(total_power > 0.0)) throw std::invalid_argument("SystemConfig: total_power must be > 0");
    if (static_cast<int>(dc_rates.size()) != dc_users)
        throw std::invalid_argument("SystemConfig: dc_rates size must equal dc_users");
    for (double r : dc_rates)
        if (!(r > 0.0)) throw std::invalid_argument("SystemConfig: DC rate targets must be > 0");
}

SharingMatrix SharingMatrix::exclusive(std::span<const int> owner, int users) {
    SharingMatrix out;
    out.rho = Matrix<double>(static_cast<std::size_t>(users), owner.size(), 0.0);
    for (std::size_t n = 0; n < owner.size(); ++n) {
        const int k = owner[n];
        if (k < 0 || k >= users)
            throw std::invalid_argument("SharingMatrix::exclusive: owner index out of range");
        out.rho(static_cast<std::size_t>(k), n) = 1.0;
    }
    return out;
}

bool SharingMatrix::is_exclusive(double tol) const {
    for (double v : rho.data())
        if (v > tol && v < 1.0 - tol) return false;
    return true;
}

void SharingMatrix::validate() const {
    for (std::size_t n = 0; n < rho.cols(); ++n) {
        double sum = 0.0;
        for (std::size_t k = 0; k < rho.rows(); ++k) {
            const double v = rho(k, n);
            if (v < -1e-12 || v > 1.0 + 1e-12)
                throw std::invalid_argument("SharingMatrix: entry outside [0, 1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("SharingMatrix: column sum differs from 1");
    }
}

const char* solver_name(SolverId id) noexcept {
    switch (id) {
        case SolverId::fixed_assignment: return "fixed_assignment";
        case SolverId::time_sharing: return "optimal_ts";
        case SolverId::dual_decomposition: return "dual";
        case SolverId::greedy: return "greedy";
        case SolverId::fsa: return "fsa";
        case SolverId::fsap: return "fsap";
        case SolverId::oracle: return "oracle";
    }
    return "unknown";
}

CsvParseError::CsvParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace ofdma
