#pragma once

#include <cstdint>

#include "sgmine/eventlog.hpp"
#include "sgmine/pat.hpp"
#include "sgmine/sdfa.hpp"

namespace sgmine {

struct AlergiaParams {
    double omega = 1.0;  // compatibility bound multiplier, > 0
    double t = 1.0;      // minimum arrival frequency for a node to be considered
    double f = 1.0;      // trace-frequency filter threshold in [0, 1]
};

// The two-sample frequency test: |g1/n1 - g2/n2| < omega * (sqrt(1/n1) + sqrt(1/n2)).
// omega subsumes the sqrt(ln(2/alpha)/2) confidence factor of the underlying
// concentration bound; no separate alpha is exposed.
// Throws DomainError when n1 or n2 is zero.
bool hoeffding_compatible(std::uint64_t g1, std::uint64_t n1, std::uint64_t g2,
                          std::uint64_t n2, double omega);

// Merge admissibility for a consolidated (red) node and a frontier (blue)
// node. Termination counts are compared directly; each action's edge ratio at
// the red node is compared against its value after a hypothetical fold of the
// blue node, which weights the usual two-sample difference by the blue mass
// fraction. Subtrees are not walked: the fold aggregates the blue node's
// direct counts into the red node's, and deeper structure follows the fold.
bool compatible(const Pat& pat, int red, int blue, double omega);

// Red-blue state merging over the prefix tree. Deterministic: the candidate
// blue node is the one with the highest arrival count (ties broken by
// lexicographically smallest access prefix), red nodes are scanned in
// promotion order, and the first compatible one wins.
Sdfa run_alergia(const EventLog& log, const AlergiaParams& params);

} // namespace sgmine
