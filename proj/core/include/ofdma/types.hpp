#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ofdma/matrix.hpp"

namespace ofdma {

inline double pos(double x) noexcept { return x > 0.0 ? x : 0.0; }

/// System under allocation: K users sharing N subcarriers under a total
/// power budget. Users [0, dc_users) are delay-constrained and must each
/// receive dc_rates[k] bits per OFDM symbol; the rest are best-effort.
struct SystemConfig {
    int users = 0;
    int dc_users = 0;
    int subcarriers = 0;
    double total_power = 0.0;           // linear; equals total SNR with N0*B = 1
    std::vector<double> dc_rates;       // size dc_users, bits per OFDM symbol

    int ndc_users() const noexcept { return users - dc_users; }
    void validate() const;
};

/// Time-sharing factors rho[k][n] in [0,1]; every column sums to one.
/// Exclusive assignments are the 0/1 special case.
struct SharingMatrix {
    Matrix<double> rho;

    static SharingMatrix exclusive(std::span<const int> owner, int users);
    bool is_exclusive(double tol = 1e-12) const;
    void validate() const;
};

enum class SolverId {
    fixed_assignment,
    time_sharing,
    dual_decomposition,
    greedy,
    fsa,
    fsap,
    oracle,
};

const char* solver_name(SolverId id) noexcept;

struct IterationCounts {
    int outer = 0;            // L0 bisection updates (ellipsoid steps for the dual solver)
    int inner = 0;            // inner-loop passes summed over every L0 evaluation
    int inner_bisection = 0;  // the subset of `inner` spent inside the bisection updates
    int doublings = 0;        // bracket doubling steps before bisection
    int total() const noexcept { return outer + inner + doublings; }
};

struct PowerSolution {
    Matrix<double> actual_power;       // s[k][n] = rho[k][n] * P[k][n]
    Matrix<double> conditional_power;  // P[k][n], power as if the subcarrier were exclusive
    std::vector<double> dc_levels;     // one rate-determined level per DC user
    double ndc_level = 0.0;            // common power-determined level of all NDC users
    double dc_power_total = 0.0;
};

struct AllocationReport {
    std::vector<double> rates;  // per user, bits per OFDM symbol
    double ndc_sum_rate = 0.0;
    bool outage = false;
    IterationCounts iterations;
    SolverId solver = SolverId::fixed_assignment;
    bool converged = true;
};

struct Allocation {
    SharingMatrix rho;
    PowerSolution power;
    AllocationReport report;
};

class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CsvParseError : public std::runtime_error {
public:
    CsvParseError(int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace ofdma
