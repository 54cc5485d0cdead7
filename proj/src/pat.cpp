#include "sgmine/pat.hpp"

#include <deque>

#include "sgmine/errors.hpp"

namespace sgmine {

Pat::Pat(const EventLog& log) {
    if (log.empty()) throw DomainError("cannot build a prefix tree from an empty log");
    add_node();
    for (const auto& [trace, mult] : log.variants()) {
        int cur = root();
        nodes_[cur].arrivals += mult;
        for (const auto& action : trace.actions) {
            auto it = nodes_[cur].children.find(action);
            int child;
            if (it == nodes_[cur].children.end()) {
                child = add_node();
                nodes_[child].access = nodes_[cur].access;
                nodes_[child].access.actions.push_back(action);
                parent_[child] = cur;
                parent_action_[child] = action;
                nodes_[cur].children[action] = {child, 0};
            } else {
                child = it->second.target;
            }
            nodes_[cur].children[action].freq += mult;
            nodes_[child].arrivals += mult;
            cur = child;
        }
        nodes_[cur].terminations += mult;
    }
}

int Pat::add_node() {
    nodes_.emplace_back();
    parent_.push_back(-1);
    parent_action_.emplace_back();
    return static_cast<int>(nodes_.size()) - 1;
}

std::uint64_t Pat::live_termination_mass() const {
    std::uint64_t total = 0;
    for (const auto& n : nodes_)
        if (n.alive) total += n.terminations;
    return total;
}

void Pat::merge_fold(int red, int blue) {
    int p = parent_[blue];
    if (p < 0) throw DomainError("cannot merge the root");
    nodes_[p].children[parent_action_[blue]].target = red;
    fold(red, blue);
}

void Pat::fold(int red, int blue) {
    Node& r = nodes_[red];
    Node& b = nodes_[blue];
    r.arrivals += b.arrivals;
    r.terminations += b.terminations;
    b.alive = false;
    for (auto& [action, edge] : b.children) {
        auto it = r.children.find(action);
        if (it == r.children.end()) {
            r.children[action] = edge;
            parent_[edge.target] = red;
            parent_action_[edge.target] = action;
        } else {
            it->second.freq += edge.freq;
            fold(it->second.target, edge.target);
        }
    }
    b.children.clear();
}

bool Pat::counts_consistent() const {
    for (const auto& n : nodes_) {
        if (!n.alive) continue;
        std::uint64_t out = n.terminations;
        for (const auto& [action, edge] : n.children) out += edge.freq;
        if (out != n.arrivals) return false;
    }
    return true;
}

Sdfa Pat::convert() const {
    std::vector<int> state(nodes_.size(), -1);
    std::deque<int> queue{root()};
    state[root()] = 0;
    int next_id = 1;
    std::vector<int> order{root()};
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        for (const auto& [action, edge] : nodes_[id].children) {
            if (state[edge.target] == -1) {
                state[edge.target] = next_id++;
                order.push_back(edge.target);
                queue.push_back(edge.target);
            }
        }
    }
    Sdfa a;
    a.initial = 0;
    a.delta.resize(next_id);
    std::set<std::string> actions;
    for (int id : order) {
        const Node& n = nodes_[id];
        for (const auto& [action, edge] : n.children) {
            double prob = static_cast<double>(edge.freq) / static_cast<double>(n.arrivals);
            a.delta[state[id]][action] = {state[edge.target], prob};
            actions.insert(action);
        }
    }
    a.alphabet.assign(actions.begin(), actions.end());
    return a;
}

Pat build_pat(const EventLog& log) { return Pat(log); }

} // namespace sgmine
