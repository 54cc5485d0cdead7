#include "sgmine/sdag.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "sgmine/dense_solver.hpp"
#include "sgmine/errors.hpp"

namespace sgmine {

namespace {

constexpr double kProbSlack = 1e-9;

void sort_arcs(std::vector<Sdag::Arc>& arcs) {
    std::sort(arcs.begin(), arcs.end(), [](const Sdag::Arc& a, const Sdag::Arc& b) {
        return std::pair(a.from, a.to) < std::pair(b.from, b.to);
    });
}

std::map<int, std::vector<std::size_t>> outgoing_index(const Sdag& g) {
    std::map<int, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < g.arcs.size(); ++i) out[g.arcs[i].from].push_back(i);
    return out;
}

std::map<int, std::vector<std::size_t>> incoming_index(const Sdag& g) {
    std::map<int, std::vector<std::size_t>> in;
    for (std::size_t i = 0; i < g.arcs.size(); ++i) in[g.arcs[i].to].push_back(i);
    return in;
}

} // namespace

void validate(const Sdag& g) {
    if (g.input == g.output) throw DomainError("input and output must be distinct");
    if (g.is_action_node(g.input) || g.is_action_node(g.output))
        throw DomainError("input/output must not carry action labels");
    std::map<int, double> outflow;
    std::set<std::pair<int, int>> seen;
    for (const auto& arc : g.arcs) {
        if (arc.to == g.input) throw DomainError("arc into the input node");
        if (arc.from == g.output) throw DomainError("arc out of the output node");
        if (arc.from != g.input && !g.is_action_node(arc.from))
            throw DomainError("arc from unknown node");
        if (arc.to != g.output && !g.is_action_node(arc.to))
            throw DomainError("arc to unknown node");
        if (arc.prob < 0.0 || arc.prob > 1.0 + kProbSlack)
            throw DomainError("flow probability outside [0, 1]");
        if (!seen.insert({arc.from, arc.to}).second) throw DomainError("duplicate arc");
        outflow[arc.from] += arc.prob;
    }
    auto check_outflow = [&](int id) {
        auto it = outflow.find(id);
        double sum = it == outflow.end() ? 0.0 : it->second;
        if (std::abs(sum - 1.0) > kProbSlack)
            throw DomainError("outgoing probabilities of node " + std::to_string(id) +
                              " sum to " + std::to_string(sum));
    };
    check_outflow(g.input);
    for (const auto& [id, label] : g.nodes) check_outflow(id);
}

Sdag sdag_of_sdfa(const Sdfa& a) {
    struct Tr {
        int from;
        std::string action;
        int to;
    };
    std::vector<Tr> trs;
    for (int s = 0; s < a.state_count(); ++s)
        for (const auto& [action, tr] : a.delta[s]) trs.push_back({s, action, tr.target});

    Sdag g;
    for (std::size_t i = 0; i < trs.size(); ++i) g.nodes[static_cast<int>(i)] = trs[i].action;
    g.input = static_cast<int>(trs.size());
    g.output = static_cast<int>(trs.size()) + 1;

    // transitions leaving each state, as node ids
    std::vector<std::vector<int>> leaving(a.state_count());
    for (std::size_t i = 0; i < trs.size(); ++i) leaving[trs[i].from].push_back(static_cast<int>(i));

    for (std::size_t i = 0; i < trs.size(); ++i) {
        int mid = trs[i].to;
        for (int j : leaving[mid]) {
            double p = a.delta[mid].at(trs[j].action).prob;
            g.arcs.push_back({static_cast<int>(i), j, p});
        }
        double term = termination_probability(a, mid);
        if (term > kProbSlack) g.arcs.push_back({static_cast<int>(i), g.output, term});
    }
    for (int j : leaving[a.initial]) {
        double p = a.delta[a.initial].at(trs[j].action).prob;
        g.arcs.push_back({g.input, j, p});
    }
    double init_term = termination_probability(a, a.initial);
    if (init_term > kProbSlack) g.arcs.push_back({g.input, g.output, init_term});

    sort_arcs(g.arcs);
    return g;
}

bool is_deterministic(const Sdag& g) {
    std::map<int, std::map<std::string, int>> seen;
    for (const auto& arc : g.arcs) {
        if (arc.to == g.output) continue;
        const std::string& label = g.nodes.at(arc.to);
        auto [it, inserted] = seen[arc.from].emplace(label, arc.to);
        if (!inserted && it->second != arc.to) return false;
    }
    return true;
}

Sdfa sfa_of_sdag(const Sdag& g) {
    if (!is_deterministic(g))
        throw DomainError("graph is not deterministic; no automaton is defined");

    std::map<int, int> state_of;
    state_of[g.input] = 0;
    int next = 1;
    for (const auto& [id, label] : g.nodes) state_of[id] = next++;

    Sdfa a;
    a.initial = 0;
    a.delta.resize(next);
    std::set<std::string> actions;
    for (const auto& arc : g.arcs) {
        if (arc.to == g.output) continue; // realizes termination mass implicitly
        const std::string& label = g.nodes.at(arc.to);
        auto& entry = a.delta[state_of.at(arc.from)][label];
        entry.target = state_of.at(arc.to);
        entry.prob += arc.prob; // singleton under determinism
        actions.insert(label);
    }
    a.alphabet.assign(actions.begin(), actions.end());
    return a;
}

double sdag_trace_probability(const Sdag& g, const Trace& t, std::size_t max_execs) {
    auto out = outgoing_index(g);

    if (is_deterministic(g)) {
        int cur = g.input;
        double prob = 1.0;
        for (const auto& action : t.actions) {
            bool found = false;
            auto it = out.find(cur);
            if (it != out.end()) {
                for (std::size_t i : it->second) {
                    const auto& arc = g.arcs[i];
                    if (arc.to != g.output && g.nodes.at(arc.to) == action) {
                        prob *= arc.prob;
                        cur = arc.to;
                        found = true;
                        break;
                    }
                }
            }
            if (!found) return 0.0;
        }
        auto it = out.find(cur);
        if (it != out.end())
            for (std::size_t i : it->second)
                if (g.arcs[i].to == g.output) return prob * g.arcs[i].prob;
        return 0.0;
    }

    double total = 0.0;
    std::size_t execs = 0;
    std::function<void(int, std::size_t, double)> walk = [&](int cur, std::size_t pos, double prob) {
        auto it = out.find(cur);
        if (it == out.end()) return;
        for (std::size_t i : it->second) {
            const auto& arc = g.arcs[i];
            if (pos == t.actions.size()) {
                if (arc.to == g.output) {
                    if (++execs > max_execs)
                        throw ResourceError("execution enumeration exceeded the bound");
                    total += prob * arc.prob;
                }
            } else if (arc.to != g.output && g.nodes.at(arc.to) == t.actions[pos]) {
                walk(arc.to, pos + 1, prob * arc.prob);
            }
        }
    };
    walk(g.input, 0, 1.0);
    return total;
}

namespace {

Sdag reduce_with_order(const Sdag& g, const std::vector<int>& order) {
    // Representative per label; fresh ids for labels with several nodes.
    std::map<std::string, std::vector<int>> by_label;
    for (int id : order) by_label[g.nodes.at(id)].push_back(id);

    int next_id = std::max(g.input, g.output) + 1;
    for (const auto& [id, label] : g.nodes) next_id = std::max(next_id, id + 1);

    std::map<int, int> repr;
    Sdag out;
    out.input = g.input;
    out.output = g.output;
    std::vector<int> fresh;
    for (auto& [label, ids] : by_label) {
        int target;
        if (ids.size() == 1) {
            target = ids.front();
        } else {
            target = next_id++;
            fresh.push_back(target);
        }
        out.nodes[target] = label;
        for (int id : ids) repr[id] = target;
    }
    repr[g.input] = g.input;
    repr[g.output] = g.output;

    // Pool arcs in the order induced by `order` so that accumulation order is
    // the only thing a shuffle can change.
    std::map<int, std::size_t> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    rank[g.input] = order.size();
    rank[g.output] = order.size() + 1;
    std::vector<std::size_t> arc_order(g.arcs.size());
    for (std::size_t i = 0; i < arc_order.size(); ++i) arc_order[i] = i;
    std::stable_sort(arc_order.begin(), arc_order.end(), [&](std::size_t i, std::size_t j) {
        return std::pair(rank.at(g.arcs[i].from), rank.at(g.arcs[i].to)) <
               std::pair(rank.at(g.arcs[j].from), rank.at(g.arcs[j].to));
    });

    std::map<std::pair<int, int>, double> pooled;
    for (std::size_t i : arc_order) {
        const auto& arc = g.arcs[i];
        pooled[{repr.at(arc.from), repr.at(arc.to)}] += arc.prob;
    }

    std::set<int> fresh_set(fresh.begin(), fresh.end());
    std::map<int, double> fresh_total;
    for (const auto& [key, prob] : pooled)
        if (fresh_set.count(key.first)) fresh_total[key.first] += prob;

    for (const auto& [key, prob] : pooled) {
        double p = prob;
        if (fresh_set.count(key.first)) p /= fresh_total.at(key.first);
        out.arcs.push_back({key.first, key.second, p});
    }
    sort_arcs(out.arcs);
    return out;
}

} // namespace

Sdag reduce_to_dfg(const Sdag& g) {
    std::vector<int> order;
    for (const auto& [id, label] : g.nodes) order.push_back(id);
    return reduce_with_order(g, order);
}

Sdag reduce_to_dfg_ordered(const Sdag& g, const std::vector<int>& order) {
    if (order.size() != g.nodes.size())
        throw DomainError("merge order must list every action node exactly once");
    return reduce_with_order(g, order);
}

AnnotatedSdag annotate_frequencies(const Sdag& g, double case_count) {
    if (case_count <= 0.0) throw DomainError("case count must be positive");
    validate(g);

    const std::size_t m = g.arcs.size();
    auto in = incoming_index(g);

    // One unknown per arc. Arc (s -> v): f = prob * (sum of incoming f of s),
    // where the input's inflow is the case count.
    std::vector<double> a(m * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& arc = g.arcs[i];
        a[i * m + i] = 1.0;
        if (arc.from == g.input) {
            b[i] = arc.prob * case_count;
        } else {
            auto it = in.find(arc.from);
            if (it != in.end())
                for (std::size_t j : it->second) a[i * m + j] -= arc.prob;
        }
    }

    std::vector<double> f = solve_dense(std::move(a), std::move(b));

    AnnotatedSdag ann;
    ann.base = g;
    ann.case_count = case_count;
    for (std::size_t i = 0; i < m; ++i)
        ann.arc_freq[{g.arcs[i].from, g.arcs[i].to}] = f[i];

    const double tol = 1e-6 * case_count;
    std::map<int, double> inflow, outflow;
    for (std::size_t i = 0; i < m; ++i) {
        inflow[g.arcs[i].to] += f[i];
        outflow[g.arcs[i].from] += f[i];
    }
    for (const auto& [id, label] : g.nodes) {
        if (std::abs(inflow[id] - outflow[id]) > tol)
            throw NumericError("conservation residual at node " + std::to_string(id));
        ann.node_freq[id] = inflow[id];
    }
    if (std::abs(outflow[g.input] - case_count) > tol)
        throw NumericError("input outflow does not match the case count");
    if (std::abs(inflow[g.output] - case_count) > tol)
        throw NumericError("output inflow does not match the case count");
    for (std::size_t i = 0; i < m; ++i) {
        const auto& arc = g.arcs[i];
        double src_in = arc.from == g.input ? case_count : inflow[arc.from];
        if (std::abs(f[i] - arc.prob * src_in) > tol)
            throw NumericError("arc equation residual");
    }
    return ann;
}

std::size_t model_size(const Sdag& g) { return g.nodes.size() + 2 + g.arcs.size(); }

Sdag probabilities_from_frequencies(const std::map<int, std::string>& nodes, int input, int output,
                                    const std::vector<FreqArc>& arcs, double case_count) {
    std::map<int, double> outflow;
    for (const auto& arc : arcs) {
        if (arc.freq < 0.0) throw DomainError("negative arc frequency");
        outflow[arc.from] += arc.freq;
    }
    if (outflow.find(input) == outflow.end())
        throw DomainError("input node has no outgoing frequency");
    if (case_count > 0.0 && std::abs(outflow[input] - case_count) > 1e-6 * case_count)
        throw DomainError("input outflow does not match the case count");
    for (const auto& [id, label] : nodes)
        if (outflow.find(id) == outflow.end() || outflow[id] <= 0.0)
            throw DomainError("zero outflow at node " + std::to_string(id));

    Sdag g;
    g.nodes = nodes;
    g.input = input;
    g.output = output;
    for (const auto& arc : arcs)
        g.arcs.push_back({arc.from, arc.to, arc.freq / outflow.at(arc.from)});
    sort_arcs(g.arcs);
    validate(g);
    return g;
}

} // namespace sgmine
