#include "sgmine/alergia.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sgmine/errors.hpp"

namespace sgmine {

bool hoeffding_compatible(std::uint64_t g1, std::uint64_t n1, std::uint64_t g2,
                          std::uint64_t n2, double omega) {
    if (n1 == 0 || n2 == 0) throw DomainError("frequency test needs positive sample sizes");
    double diff = std::abs(static_cast<double>(g1) / static_cast<double>(n1) -
                           static_cast<double>(g2) / static_cast<double>(n2));
    double bound = omega * (std::sqrt(1.0 / static_cast<double>(n1)) +
                            std::sqrt(1.0 / static_cast<double>(n2)));
    return diff < bound;
}

bool compatible(const Pat& pat, int red, int blue, double omega) {
    const Pat::Node& r = pat.node(red);
    const Pat::Node& b = pat.node(blue);
    if (!hoeffding_compatible(r.terminations, r.arrivals, b.terminations, b.arrivals, omega))
        return false;

    std::set<std::string> actions;
    for (const auto& [action, edge] : r.children) actions.insert(action);
    for (const auto& [action, edge] : b.children) actions.insert(action);

    const std::uint64_t merged_arrivals = r.arrivals + b.arrivals;
    for (const auto& action : actions) {
        auto rit = r.children.find(action);
        auto bit = b.children.find(action);
        std::uint64_t g_red = rit == r.children.end() ? 0 : rit->second.freq;
        std::uint64_t g_blue = bit == b.children.end() ? 0 : bit->second.freq;
        if (!hoeffding_compatible(g_red, r.arrivals, g_red + g_blue, merged_arrivals, omega))
            return false;
    }
    return true;
}

namespace {

// Blue set: live non-red targets of red nodes' edges.
std::vector<int> blue_frontier(const Pat& pat, const std::vector<int>& red,
                               const std::set<int>& red_set) {
    std::set<int> blue;
    for (int r : red) {
        for (const auto& [action, edge] : pat.node(r).children) {
            if (!red_set.count(edge.target) && pat.node(edge.target).alive)
                blue.insert(edge.target);
        }
    }
    return {blue.begin(), blue.end()};
}

int pick_candidate(const Pat& pat, const std::vector<int>& blue, double t) {
    int best = -1;
    for (int id : blue) {
        const Pat::Node& n = pat.node(id);
        if (static_cast<double>(n.arrivals) < t) continue;
        if (best == -1) {
            best = id;
            continue;
        }
        const Pat::Node& cur = pat.node(best);
        if (n.arrivals > cur.arrivals ||
            (n.arrivals == cur.arrivals && n.access < cur.access))
            best = id;
    }
    return best;
}

} // namespace

Sdfa run_alergia(const EventLog& log, const AlergiaParams& params) {
    if (params.omega <= 0.0) throw DomainError("omega must be positive");
    if (params.t < 0.0) throw DomainError("t must be non-negative");
    if (params.f < 0.0 || params.f > 1.0) throw DomainError("f must lie in [0, 1]");
    if (log.empty()) throw DomainError("cannot learn from an empty log");

    EventLog filtered = filter_by_frequency(log, params.f);
    Pat pat(filtered);

    std::vector<int> red{pat.root()};
    std::set<int> red_set{pat.root()};

    while (true) {
        std::vector<int> blue = blue_frontier(pat, red, red_set);
        int candidate = pick_candidate(pat, blue, params.t);
        if (candidate == -1) break;

        int merged_into = -1;
        for (int r : red) {
            if (compatible(pat, r, candidate, params.omega)) {
                merged_into = r;
                break;
            }
        }
        if (merged_into >= 0) {
            pat.merge_fold(merged_into, candidate);
        } else {
            red.push_back(candidate);
            red_set.insert(candidate);
        }
    }
    return pat.convert();
}

} // namespace sgmine
