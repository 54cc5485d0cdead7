#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sgmine {

// An ordered sequence of action names. The empty trace is legal.
struct Trace {
    std::vector<std::string> actions;

    Trace() = default;
    Trace(std::initializer_list<std::string> init) : actions(init) {}
    explicit Trace(std::vector<std::string> a) : actions(std::move(a)) {}

    bool empty() const { return actions.empty(); }
    std::size_t size() const { return actions.size(); }

    auto operator<=>(const Trace&) const = default;
};

// A finite multiset of traces. Immutable once built; variants are kept in
// lexicographic order so every iteration over the log is deterministic.
class EventLog {
public:
    EventLog() = default;

    void add(const Trace& trace, std::uint64_t multiplicity);

    const std::map<Trace, std::uint64_t>& variants() const { return variants_; }
    std::uint64_t total_traces() const { return total_; }
    std::uint64_t multiplicity(const Trace& t) const;
    const std::set<std::string>& alphabet() const { return alphabet_; }
    bool empty() const { return variants_.empty(); }

    bool operator==(const EventLog&) const = default;

private:
    std::map<Trace, std::uint64_t> variants_;
    std::set<std::string> alphabet_;
    std::uint64_t total_ = 0;
};

struct EmpiricalDistribution {
    std::map<Trace, double> probs;
};

// Plain variant format: one `<multiplicity>;<action>(,<action>)*` per line,
// `#` comments, blank lines ignored. Repeated variant lines accumulate.
EventLog parse_log(const std::string& text);
std::string serialize_log(const EventLog& log);

// XES subset: <log> of <trace> of <event>, action name taken from the
// event's string attribute with key "concept:name". Everything else ignored.
EventLog parse_xes(const std::string& text);

EmpiricalDistribution empirical_distribution(const EventLog& log);

// Keeps the shortest prefix of the variants, ordered by multiplicity
// descending (ties: lexicographic), whose cumulative relative frequency
// reaches f. f = 0 returns the log unchanged.
EventLog filter_by_frequency(const EventLog& log, double f);

} // namespace sgmine
