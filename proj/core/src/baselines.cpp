#include "ofdma/baselines.hpp"

#include <stdexcept>

#include "ofdma/waterfill.hpp"

namespace ofdma::baselines {

namespace {

std::vector<int> count_per_user(const std::vector<int>& assignment, int users) {
    std::vector<int> counts(static_cast<std::size_t>(users), 0);
    for (int owner : assignment) ++counts[static_cast<std::size_t>(owner)];
    return counts;
}

}  // namespace

CombPattern fsa_pattern(int users, int subcarriers) {
    if (users < 1 || subcarriers < 1)
        throw std::invalid_argument("fsa_pattern: users and subcarriers must be >= 1");
    if (subcarriers % users != 0)
        throw std::invalid_argument("fsa_pattern: users must divide subcarriers");

    CombPattern p;
    p.assignment.resize(static_cast<std::size_t>(subcarriers));
    for (int c = 0; c < subcarriers; ++c)
        p.assignment[static_cast<std::size_t>(c)] = c % users;
    p.counts = count_per_user(p.assignment, users);
    return p;
}

CombPattern fsap_pattern(const SystemConfig& cfg) {
    const int users = cfg.users;
    const int dc = cfg.dc_users;
    const int n = cfg.subcarriers;
    if (users < 1 || n < 1) throw std::invalid_argument("fsap_pattern: invalid config");
    if (dc == 0) return fsa_pattern(users, n);

    const int ndc = users - dc;
    const int cycle_len = 3 * dc + ndc;
    if (n % cycle_len != 0)
        throw std::invalid_argument("fsap_pattern: cycle length does not divide subcarriers");

    // One DC/NDC interleaved round, then two plain DC rounds.
    std::vector<int> cycle;
    cycle.reserve(static_cast<std::size_t>(cycle_len));
    for (int i = 0; i < std::max(dc, ndc); ++i) {
        if (i < dc) cycle.push_back(i);
        if (i < ndc) cycle.push_back(dc + i);
    }
    for (int round = 0; round < 2; ++round)
        for (int i = 0; i < dc; ++i) cycle.push_back(i);

    CombPattern p;
    p.assignment.resize(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c)
        p.assignment[static_cast<std::size_t>(c)] =
            cycle[static_cast<std::size_t>(c % cycle_len)];
    p.counts = count_per_user(p.assignment, users);
    return p;
}

CombPattern collapse_ndc(const CombPattern& base, int dc_users, int ndc_user) {
    if (ndc_user < dc_users)
        throw std::invalid_argument("collapse_ndc: target must be an NDC user");
    CombPattern p = base;
    int users = ndc_user + 1;
    for (int owner : p.assignment) users = std::max(users, owner + 1);
    for (int& owner : p.assignment)
        if (owner >= dc_users) owner = ndc_user;
    p.counts = count_per_user(p.assignment, users);
    return p;
}

Allocation allocate_fixed(const SystemConfig& cfg, const Matrix<double>& alpha,
                          const CombPattern& pattern, SolverId label) {
    if (static_cast<int>(pattern.assignment.size()) != cfg.subcarriers)
        throw std::invalid_argument("allocate_fixed: pattern size mismatch");
    for (int owner : pattern.assignment)
        if (owner < 0 || owner >= cfg.users)
            throw std::invalid_argument("allocate_fixed: pattern user out of range");

    Allocation out = waterfill::allocate_given_assignment(
        cfg, alpha, SharingMatrix::exclusive(pattern.assignment, cfg.users));
    out.report.solver = label;
    return out;
}

}  // namespace ofdma::baselines
