#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgmine/eventlog.hpp"

namespace sgmine {

// Stochastic deterministic finite automaton. States are dense integer ids;
// per-state outgoing probabilities sum to at most 1, the deficit being the
// probability of terminating there.
struct Sdfa {
    struct Transition {
        int target = 0;
        double prob = 0.0;
    };

    int initial = 0;
    std::vector<std::string> alphabet;
    // delta[s][action] -> transition; defined exactly where prob is defined.
    std::vector<std::map<std::string, Transition>> delta;

    int state_count() const { return static_cast<int>(delta.size()); }
};

// Throws DomainError if probabilities are negative, per-state sums exceed
// 1 + 1e-9, targets are out of range, or some state is unreachable.
void validate(const Sdfa& a);

// 1 - sum of outgoing probabilities, clamped into [0, 1].
double termination_probability(const Sdfa& a, int state);

// Probability the automaton assigns to the trace; 0 when a step is undefined.
double trace_probability(const Sdfa& a, const Trace& t);

// Total probability mass over all traces of length <= max_len, computed by
// propagating per-state mass vectors (no trace enumeration).
double language_mass(const Sdfa& a, std::size_t max_len);

// Relabels states in BFS order from the initial state (edges explored in
// action order) and drops unreachable states.
Sdfa canonicalize(const Sdfa& a);

} // namespace sgmine
