#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sgmine/errors.hpp"
#include "sgmine/eventlog.hpp"
#include "sgmine/model_io.hpp"
#include "sgmine/pat.hpp"
#include "sgmine/sdfa.hpp"
#include "support/generators.hpp"

using namespace sgmine;

namespace {

const std::string kExampleLog = "1057;a,c,e,c\n272;a,b,c,e\n164;b,b,b,d\n";

Sdfa displayed_reference() {
    // the five-state reference automaton with its displayed probabilities
    Sdfa a;
    a.initial = 0;
    a.alphabet = {"a", "b", "c", "e"};
    a.delta.resize(5);
    a.delta[0]["a"] = {1, 1.0};
    a.delta[1]["b"] = {1, 0.17};
    a.delta[1]["c"] = {2, 0.83};
    a.delta[2]["e"] = {3, 1.0};
    a.delta[3]["c"] = {4, 0.80};
    return a;
}

// independent prefix counting over the raw traces
std::uint64_t prefix_count(const EventLog& log, const Trace& prefix) {
    std::uint64_t total = 0;
    for (const auto& [t, m] : log.variants()) {
        if (t.actions.size() < prefix.actions.size()) continue;
        if (std::equal(prefix.actions.begin(), prefix.actions.end(), t.actions.begin()))
            total += m;
    }
    return total;
}

} // namespace

TEST_CASE("prefix tree of the filtered example log") {
    EventLog filtered = filter_by_frequency(parse_log(kExampleLog), 0.89);
    Pat pat(filtered);

    const auto& root = pat.node(pat.root());
    CHECK(root.arrivals == 1329);
    CHECK(root.terminations == 0);
    REQUIRE(root.children.size() == 1);
    CHECK(root.children.at("a").freq == 1329);

    const auto& a = pat.node(root.children.at("a").target);
    CHECK(a.children.at("c").freq == 1057);
    CHECK(a.children.at("b").freq == 272);

    int acec = a.children.at("c").target;
    acec = pat.node(acec).children.at("e").target;
    acec = pat.node(acec).children.at("c").target;
    CHECK(pat.node(acec).terminations == 1057);

    int abce = a.children.at("b").target;
    abce = pat.node(abce).children.at("c").target;
    abce = pat.node(abce).children.at("e").target;
    CHECK(pat.node(abce).terminations == 272);

    CHECK(pat.counts_consistent());
}

TEST_CASE("prefix tree trivia") {
    EventLog eps = parse_log("5;\n");
    Pat pat(eps);
    CHECK(pat.node(pat.root()).arrivals == 5);
    CHECK(pat.node(pat.root()).terminations == 5);
    CHECK(pat.node(pat.root()).children.empty());

    CHECK_THROWS_AS(Pat(EventLog{}), DomainError);
}

TEST_CASE("unfiltered prefix tree matches a prefix-count oracle") {
    EventLog log = parse_log(kExampleLog);
    Pat pat(log);
    const auto& root = pat.node(pat.root());
    CHECK(root.arrivals == 1493);
    CHECK(root.children.at("a").freq == prefix_count(log, Trace{"a"}));
    CHECK(root.children.at("b").freq == prefix_count(log, Trace{"b"}));
    CHECK(root.children.at("a").freq == 1329);
    CHECK(root.children.at("b").freq == 164);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        EventLog l = testing::random_log(rng);
        Pat p(l);
        // walk every node and compare its edge frequencies with raw counts
        for (std::size_t id = 0; id < p.node_count(); ++id) {
            const auto& n = p.node(static_cast<int>(id));
            for (const auto& [action, edge] : n.children) {
                Trace prefix = n.access;
                prefix.actions.push_back(action);
                CHECK(edge.freq == prefix_count(l, prefix));
            }
        }
        CHECK(p.counts_consistent());
    }
}

TEST_CASE("trace probabilities of the displayed reference automaton") {
    Sdfa a = displayed_reference();
    CHECK(trace_probability(a, Trace{"a", "c", "e", "c"}) ==
          doctest::Approx(0.664).epsilon(1e-9));
    CHECK(trace_probability(a, Trace{"a", "b", "c", "e"}) ==
          doctest::Approx(0.028).epsilon(0.02));
    CHECK(trace_probability(a, Trace{"b", "b", "b", "d"}) == 0.0);
}

TEST_CASE("termination probabilities") {
    Sdfa a = displayed_reference();
    CHECK(termination_probability(a, 3) == doctest::Approx(0.20));
    CHECK(termination_probability(a, 4) == 1.0);
    CHECK(termination_probability(a, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(termination_probability(a, 9), DomainError);
}

TEST_CASE("language mass") {
    Sdfa a = displayed_reference();

    // closed form over the single loop: sum_k pb^k * pc * (term3 + pc3),
    // truncated to traces of length <= 30
    double expect = 0.0;
    for (int k = 0; 4 + k <= 30; ++k) {
        double loop = std::pow(0.17, k) * 0.83;
        expect += loop * 0.20; // a b^k c e        (length 3 + k)
        expect += loop * 0.80; // a b^k c e c      (length 4 + k)
    }
    double mass = language_mass(a, 30);
    CHECK(mass == doctest::Approx(expect).epsilon(1e-12));
    CHECK(mass >= 0.999);

    CHECK(language_mass(a, 0) == termination_probability(a, 0));

    EventLog filtered = filter_by_frequency(parse_log(kExampleLog), 0.89);
    Sdfa tree = Pat(filtered).convert();
    CHECK(language_mass(tree, 4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("language mass is monotone and bounded") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        Sdfa a = testing::random_sdfa(rng);
        double prev = 0.0;
        for (std::size_t len = 0; len <= 8; ++len) {
            double mass = language_mass(a, len);
            CHECK(mass >= prev - 1e-12);
            CHECK(mass <= 1.0 + 1e-9);
            prev = mass;
        }
    }
}

TEST_CASE("converted unmerged prefix tree reproduces the empirical distribution") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 40; ++i) {
        EventLog log = testing::random_log(rng);
        Sdfa tree = Pat(log).convert();
        EmpiricalDistribution dist = empirical_distribution(log);
        for (const auto& [t, p] : dist.probs)
            CHECK(trace_probability(tree, t) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("validate flags broken automata") {
    Sdfa bad = displayed_reference();
    bad.delta[1]["b"].prob = 0.9; // outgoing sum 1.73
    CHECK_THROWS_AS(validate(bad), DomainError);

    Sdfa unreachable = displayed_reference();
    unreachable.delta.emplace_back(); // extra state nothing points at
    CHECK_THROWS_AS(validate(unreachable), DomainError);

    CHECK_NOTHROW(validate(displayed_reference()));
}

TEST_CASE("model JSON round-trips an automaton") {
    Sdfa a = displayed_reference();
    Model m = read_model_json(sdfa_to_json(a));
    REQUIRE(std::holds_alternative<Sdfa>(m));
    const Sdfa& b = std::get<Sdfa>(m);
    REQUIRE(b.state_count() == a.state_count());
    std::vector<Trace> probes{{}, {"a"}, {"a", "c", "e", "c"}, {"a", "b", "c", "e"},
                              {"a", "b", "b", "c", "e"}};
    for (const auto& t : probes)
        CHECK(trace_probability(b, t) == doctest::Approx(trace_probability(a, t)).epsilon(1e-12));
}

TEST_CASE("automaton DOT export mentions every state and edge label") {
    std::string dot = sdfa_to_dot(displayed_reference());
    CHECK(dot.find("s0") != std::string::npos);
    CHECK(dot.find("s4") != std::string::npos);
    CHECK(dot.find("c (0.83)") != std::string::npos);
    CHECK(dot.find("0.20") != std::string::npos);
}
