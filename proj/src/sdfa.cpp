#include "sgmine/sdfa.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "sgmine/errors.hpp"

namespace sgmine {

namespace {
constexpr double kProbSlack = 1e-9;
}

void validate(const Sdfa& a) {
    if (a.delta.empty()) throw DomainError("automaton has no states");
    if (a.initial < 0 || a.initial >= a.state_count())
        throw DomainError("initial state out of range");
    for (int s = 0; s < a.state_count(); ++s) {
        double sum = 0.0;
        for (const auto& [action, tr] : a.delta[s]) {
            if (tr.prob < 0.0) throw DomainError("negative transition probability");
            if (tr.target < 0 || tr.target >= a.state_count())
                throw DomainError("transition target out of range");
            sum += tr.prob;
        }
        if (sum > 1.0 + kProbSlack)
            throw DomainError("outgoing probabilities exceed 1 at state " + std::to_string(s));
    }
    std::vector<bool> seen(a.delta.size(), false);
    std::deque<int> queue{a.initial};
    seen[a.initial] = true;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& [action, tr] : a.delta[s]) {
            if (!seen[tr.target]) {
                seen[tr.target] = true;
                queue.push_back(tr.target);
            }
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw DomainError("automaton has unreachable states");
}

double termination_probability(const Sdfa& a, int state) {
    if (state < 0 || state >= a.state_count())
        throw DomainError("unknown state " + std::to_string(state));
    double sum = 0.0;
    for (const auto& [action, tr] : a.delta[state]) sum += tr.prob;
    return std::clamp(1.0 - sum, 0.0, 1.0);
}

double trace_probability(const Sdfa& a, const Trace& t) {
    int state = a.initial;
    double prob = 1.0;
    for (const auto& action : t.actions) {
        auto it = a.delta[state].find(action);
        if (it == a.delta[state].end()) return 0.0;
        prob *= it->second.prob;
        state = it->second.target;
    }
    return prob * termination_probability(a, state);
}

double language_mass(const Sdfa& a, std::size_t max_len) {
    std::vector<double> mass(a.delta.size(), 0.0);
    mass[a.initial] = 1.0;
    double total = 0.0;
    for (std::size_t len = 0;; ++len) {
        for (int s = 0; s < a.state_count(); ++s)
            if (mass[s] > 0.0) total += mass[s] * termination_probability(a, s);
        if (len == max_len) break;
        std::vector<double> next(a.delta.size(), 0.0);
        for (int s = 0; s < a.state_count(); ++s) {
            if (mass[s] == 0.0) continue;
            for (const auto& [action, tr] : a.delta[s]) next[tr.target] += mass[s] * tr.prob;
        }
        mass.swap(next);
    }
    return total;
}

Sdfa canonicalize(const Sdfa& a) {
    std::vector<int> order(a.delta.size(), -1);
    std::deque<int> queue{a.initial};
    order[a.initial] = 0;
    int next_id = 1;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const auto& [action, tr] : a.delta[s]) {
            if (order[tr.target] == -1) {
                order[tr.target] = next_id++;
                queue.push_back(tr.target);
            }
        }
    }
    Sdfa out;
    out.initial = 0;
    out.delta.resize(next_id);
    std::set<std::string> actions;
    for (int s = 0; s < a.state_count(); ++s) {
        if (order[s] == -1) continue; // unreachable: dropped
        for (const auto& [action, tr] : a.delta[s]) {
            out.delta[order[s]][action] = {order[tr.target], tr.prob};
            actions.insert(action);
        }
    }
    out.alphabet.assign(actions.begin(), actions.end());
    return out;
}

} // namespace sgmine
