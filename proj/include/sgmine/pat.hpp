#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sgmine/eventlog.hpp"
#include "sgmine/sdfa.hpp"

namespace sgmine {

// Frequency prefix acceptor tree. Every node holds the number of traces
// arriving at its prefix and the number terminating exactly there; an edge's
// frequency counts the traces continuing with that action.
//
// The state-merging learner mutates this structure in place: edges may be
// redirected at consolidated nodes (turning the tree into an automaton in
// progress) and folded nodes are marked dead. The count invariant
// arrivals == terminations + sum of outgoing edge frequencies holds at every
// live node throughout.
class Pat {
public:
    struct Edge {
        int target = -1;
        std::uint64_t freq = 0;
    };

    struct Node {
        std::uint64_t arrivals = 0;
        std::uint64_t terminations = 0;
        std::map<std::string, Edge> children;
        Trace access; // path from the root in the original tree
        bool alive = true;
    };

    explicit Pat(const EventLog& log);

    int root() const { return 0; }
    const Node& node(int id) const { return nodes_.at(id); }
    Node& node(int id) { return nodes_.at(id); }
    std::size_t node_count() const { return nodes_.size(); }

    std::uint64_t live_termination_mass() const;

    // Redirects the edge entering `blue` to `red` and folds blue's subtree
    // into red's, summing counts. `blue` and its folded descendants die.
    void merge_fold(int red, int blue);

    // Converts the (possibly merged) structure into an automaton: probability
    // of an edge is its frequency over the source's arrivals. States are
    // canonicalized in BFS order from the root.
    Sdfa convert() const;

    // Checks arrivals == terminations + sum(edge freqs) at every live node.
    bool counts_consistent() const;

private:
    int add_node();
    void fold(int red, int blue);

    std::vector<Node> nodes_;
    std::vector<int> parent_;           // original tree parent, for redirects
    std::vector<std::string> parent_action_;
};

Pat build_pat(const EventLog& log);

} // namespace sgmine
