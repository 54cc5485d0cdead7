#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sgmine/eventlog.hpp"
#include "sgmine/sdfa.hpp"

namespace sgmine {

// Stochastic directed action graph: action-labeled nodes between a
// distinguished input and output, with flow probabilities that sum to 1 on
// the outgoing arcs of every node and of the input.
struct Sdag {
    struct Arc {
        int from = 0;
        int to = 0;
        double prob = 0.0;
    };

    std::map<int, std::string> nodes; // action nodes only
    int input = 0;
    int output = 0;
    std::vector<Arc> arcs; // kept sorted by (from, to); at most one arc per pair

    bool is_action_node(int id) const { return nodes.count(id) != 0; }
};

struct AnnotatedSdag {
    Sdag base;
    std::map<std::pair<int, int>, double> arc_freq;
    std::map<int, double> node_freq; // action nodes; input/output carry case_count
    double case_count = 0.0;
};

// Structural checks: arc endpoints valid, no arc into input or out of output,
// outflow sums to 1 (within 1e-9) at every action node and at input.
void validate(const Sdag& g);

// One node per automaton transition; arcs follow the shared middle state,
// plus input fan-out, termination arcs to output, and an input->output arc
// when the initial state can terminate immediately.
Sdag sdag_of_sdfa(const Sdfa& a);

// True iff no node (input included) has two outgoing arcs to distinct,
// equally-labeled nodes.
bool is_deterministic(const Sdag& g);

// States are the nodes plus the input; requires a deterministic graph.
Sdfa sfa_of_sdag(const Sdag& g);

// Sum of the probabilities of all executions confirming the trace. For a
// deterministic graph this follows the unique execution; otherwise all
// confirming executions are enumerated, erroring beyond max_execs.
double sdag_trace_probability(const Sdag& g, const Trace& t, std::size_t max_execs = 1u << 20);

// Merges all equally-labeled nodes so the result has one node per action.
// Outgoing probabilities of a merged node are pooled and renormalized by
// their total; arcs sharing endpoints combine by summing.
Sdag reduce_to_dfg(const Sdag& g);

// Same reduction with an explicit node-accumulation order per label, for
// order-independence checks. `order` lists all action node ids, a permutation
// of the graph's; nodes of each label are pooled in this sequence.
Sdag reduce_to_dfg_ordered(const Sdag& g, const std::vector<int>& order);

// Solves the conservation/arc equation system for the given number of cases.
AnnotatedSdag annotate_frequencies(const Sdag& g, double case_count);

// Node count (input and output included) plus arc count.
std::size_t model_size(const Sdag& g);

struct FreqArc {
    int from = 0;
    int to = 0;
    double freq = 0.0;
};

// Builds flow probabilities from arc frequencies: each arc's frequency over
// its source's total outflow.
Sdag probabilities_from_frequencies(const std::map<int, std::string>& nodes, int input, int output,
                                    const std::vector<FreqArc>& arcs, double case_count);

} // namespace sgmine
