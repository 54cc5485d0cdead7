#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sgmine/errors.hpp"
#include "sgmine/gaspd.hpp"
#include "support/generators.hpp"

using namespace sgmine;

namespace {

const std::string kExampleLog = "1057;a,c,e,c\n272;a,b,c,e\n164;b,b,b,d\n";

EventLog example_log() { return parse_log(kExampleLog); }

Individual point(std::size_t size, double relevance) {
    Individual ind;
    ind.eval = Evaluation{size, relevance};
    return ind;
}

// quadratic dominance scan, the reference for the frontier implementation
std::vector<Individual> brute_force_frontier(const std::vector<Individual>& points) {
    std::vector<Individual> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& ei = *points[i].eval;
        bool excluded = false;
        for (std::size_t j = 0; j < points.size() && !excluded; ++j) {
            if (i == j) continue;
            const auto& ej = *points[j].eval;
            bool dominates = ej.size <= ei.size && ej.relevance <= ei.relevance &&
                             (ej.size < ei.size || ej.relevance < ei.relevance);
            bool earlier_duplicate =
                j < i && ej.size == ei.size && ej.relevance == ei.relevance;
            excluded = dominates || earlier_duplicate;
        }
        if (!excluded) out.push_back(points[i]);
    }
    return out;
}

} // namespace

TEST_CASE("initial population respects bounds and the seed") {
    SearchConfig config;
    config.population_size = 50;
    config.parents_k = 4;
    config.rng_seed = 42;

    Rng rng1(42), rng2(42);
    auto pop1 = init_population(config, 300.0, rng1);
    auto pop2 = init_population(config, 300.0, rng2);
    REQUIRE(pop1.size() == 50);
    std::set<std::tuple<double, double, double>> distinct;
    for (std::size_t i = 0; i < pop1.size(); ++i) {
        const auto& p = pop1[i].params;
        CHECK(p.omega >= config.omega_min);
        CHECK(p.omega <= config.omega_max);
        CHECK(p.t >= 0.0);
        CHECK(p.t <= 300.0);
        CHECK(p.f >= 0.0);
        CHECK(p.f <= 1.0);
        CHECK(pop2[i].params.omega == p.omega);
        CHECK(pop2[i].params.t == p.t);
        CHECK(pop2[i].params.f == p.f);
        distinct.insert({p.omega, p.t, p.f});
    }
    CHECK(distinct.size() == 50);

    // collapsed omega range pins every draw to the floor
    SearchConfig degenerate = config;
    degenerate.omega_max = degenerate.omega_min;
    Rng rng3(1);
    for (const auto& ind : init_population(degenerate, 300.0, rng3))
        CHECK(ind.params.omega == degenerate.omega_min);
}

TEST_CASE("uniform draws center where they should") {
    Rng rng(99);
    double sum_f = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum_f += uniform01(rng);
    CHECK(std::abs(sum_f / n - 0.5) < 0.02);
}

TEST_CASE("pareto frontier basics") {
    std::vector<Individual> pts{point(10, 5.0), point(12, 4.0), point(11, 6.0)};
    auto front = pareto_frontier(pts);
    REQUIRE(front.size() == 2);
    CHECK(front[0].eval->size == 10);
    CHECK(front[1].eval->size == 12);

    auto single = pareto_frontier({point(3, 1.0)});
    REQUIRE(single.size() == 1);

    // duplicates: only the first of an equal pair is kept
    auto dup = pareto_frontier({point(5, 2.0), point(5, 2.0)});
    CHECK(dup.size() == 1);

    CHECK_THROWS_AS(pareto_frontier({Individual{}}), DomainError);
}

TEST_CASE("pareto frontier matches the quadratic oracle") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 100; ++round) {
        std::vector<Individual> pts;
        std::size_t n = testing::pick(rng, 1, 100);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t size = testing::pick(rng, 5, 30);
            double rel = 1.0 + 4.0 * testing::unit(rng);
            if (testing::unit(rng) < 0.2 && !pts.empty()) {
                pts.push_back(pts[testing::pick(rng, 0, pts.size() - 1)]); // force duplicates
            } else {
                pts.push_back(point(size, rel));
            }
        }
        auto fast = pareto_frontier(pts);
        auto slow = brute_force_frontier(pts);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i].eval->size == slow[i].eval->size);
            CHECK(fast[i].eval->relevance == slow[i].eval->relevance);
        }
    }
}

TEST_CASE("crossover produces exactly the eight recombinations") {
    AlergiaParams p1{1.0, 1.0, 0.89};
    AlergiaParams p2{2.0, 5.0, 0.5};
    auto kids = crossover(p1, p2);
    REQUIRE(kids.size() == 8);

    auto has = [&](double w, double t, double f) {
        for (const auto& k : kids)
            if (k.omega == w && k.t == t && k.f == f) return true;
        return false;
    };
    CHECK(has(1.0, 5.0, 0.5));  // swap after position one
    CHECK(has(2.0, 1.0, 0.89));
    CHECK(has(1.0, 1.0, 0.5));  // swap after position two
    CHECK(has(2.0, 5.0, 0.89));
    CHECK(has(1.0, 1.0, 0.89)); // swap after position three (copies)
    CHECK(has(2.0, 5.0, 0.5));
    CHECK(has(1.0, 5.0, 0.89)); // double point
    CHECK(has(2.0, 1.0, 0.5));

    for (const auto& k : kids) {
        CHECK((k.omega == p1.omega || k.omega == p2.omega));
        CHECK((k.t == p1.t || k.t == p2.t));
        CHECK((k.f == p1.f || k.f == p2.f));
    }

    for (const auto& k : crossover(p1, p1)) {
        CHECK(k.omega == p1.omega);
        CHECK(k.t == p1.t);
        CHECK(k.f == p1.f);
    }
}

TEST_CASE("mutation stays within bounds and centers at zero") {
    SearchConfig config;
    config.parents_k = 2;
    const double t_max = 300.0;
    Rng rng(4);

    AlergiaParams edge{14.9, 299.0, 0.99};
    for (int i = 0; i < 1000; ++i) {
        AlergiaParams m = mutate(edge, config, t_max, rng);
        CHECK(m.omega >= config.omega_min);
        CHECK(m.omega <= config.omega_max);
        CHECK(m.t >= 0.0);
        CHECK(m.t <= t_max);
        CHECK(m.f >= 0.0);
        CHECK(m.f <= 1.0);
    }

    SearchConfig frozen = config;
    frozen.mutation_scale = 0.0;
    AlergiaParams same = mutate(edge, frozen, t_max, rng);
    CHECK(same.omega == edge.omega);
    CHECK(same.t == edge.t);
    CHECK(same.f == edge.f);

    // mean drift of an interior point is near zero
    AlergiaParams mid{7.0, 150.0, 0.5};
    double dw = 0.0, dt = 0.0, df = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        AlergiaParams m = mutate(mid, config, t_max, rng);
        dw += m.omega - mid.omega;
        dt += m.t - mid.t;
        df += m.f - mid.f;
    }
    CHECK(std::abs(dw / n) < 0.01 * config.omega_max);
    CHECK(std::abs(dt / n) < 0.01 * t_max);
    CHECK(std::abs(df / n) < 0.01);
}

TEST_CASE("evaluation scores the learned graph") {
    EventLog log = example_log();
    Evaluation golden = evaluate(log, {1.0, 1.0, 0.89});
    CHECK(golden.size == 16);
    CHECK(std::abs(golden.relevance - 3.275) < 0.01);
    CHECK(golden.relevance <= 3.28);

    // nothing reaches the threshold: tree-shaped model scores at the entropy
    Evaluation tree = evaluate(log, {1.0, 2000.0, 1.0});
    CHECK(tree.relevance == doctest::Approx(1.150297).epsilon(1e-6));

    // purity: a second call reproduces the same numbers
    Evaluation again = evaluate(log, {1.0, 1.0, 0.89});
    CHECK(again.size == golden.size);
    CHECK(again.relevance == golden.relevance);
}

TEST_CASE("default t bound is the busiest tree branch") {
    CHECK(default_t_max(example_log()) == 1329.0);
}

TEST_CASE("search with no generations reports the initial frontier") {
    SearchConfig config;
    config.population_size = 12;
    config.generations = 0;
    config.parents_k = 3;
    config.rng_seed = 5;
    SearchResult res = run_search(example_log(), config);
    CHECK(res.history.per_generation.empty());
    CHECK_FALSE(res.frontier.empty());
    for (const auto& ind : res.frontier) {
        CHECK(ind.ever_good);
        CHECK(ind.eval.has_value());
    }
}

TEST_CASE("search is reproducible and its frontiers never regress") {
    SearchConfig config;
    config.population_size = 10;
    config.generations = 8;
    config.parents_k = 3;
    config.rng_seed = 11;

    SearchResult a = run_search(example_log(), config);
    SearchResult b = run_search(example_log(), config);
    CHECK(frontier_csv(a.frontier, 8) == frontier_csv(b.frontier, 8));
    CHECK(history_csv(a.history) == history_csv(b.history));

    // the worker count must not leak into the results
    SearchConfig parallel = config;
    parallel.threads = 3;
    SearchResult c = run_search(example_log(), parallel);
    CHECK(frontier_csv(a.frontier, 8) == frontier_csv(c.frontier, 8));
    CHECK(history_csv(a.history) == history_csv(c.history));

    // the first frontier is entirely new to the archive
    REQUIRE_FALSE(a.history.per_generation.empty());
    CHECK(a.history.per_generation[0].new_good ==
          a.history.per_generation[0].frontier.size());

    // no later frontier point is dominated by any earlier frontier point
    auto all_records = a.history.per_generation;
    GenerationRecord final_record;
    final_record.frontier = a.frontier;
    all_records.push_back(final_record);
    for (std::size_t later = 0; later < all_records.size(); ++later) {
        for (std::size_t earlier = 0; earlier < later; ++earlier) {
            for (const auto& lp : all_records[later].frontier) {
                for (const auto& ep : all_records[earlier].frontier) {
                    bool dominated = ep.eval->size <= lp.eval->size &&
                                     ep.eval->relevance <= lp.eval->relevance &&
                                     (ep.eval->size < lp.eval->size ||
                                      ep.eval->relevance < lp.eval->relevance);
                    CHECK_FALSE(dominated);
                }
            }
        }
    }

    // bounds hold everywhere
    for (const auto& rec : a.history.per_generation)
        for (const auto& ind : rec.frontier) {
            CHECK(ind.params.omega >= config.omega_min);
            CHECK(ind.params.omega <= config.omega_max);
            CHECK(ind.params.f >= 0.0);
            CHECK(ind.params.f <= 1.0);
        }
}

TEST_CASE("lineage fractions are recorded and bounded") {
    SearchConfig config;
    config.population_size = 10;
    config.generations = 6;
    config.parents_k = 3;
    config.rng_seed = 3;
    config.lineage_experiment = true;

    SearchResult res = run_search(example_log(), config);
    REQUIRE(res.history.per_generation.size() == 6);
    for (const auto& rec : res.history.per_generation) {
        REQUIRE(rec.frac_good_from_good.has_value());
        REQUIRE(rec.frac_good_from_bad.has_value());
        CHECK(*rec.frac_good_from_good >= 0.0);
        CHECK(*rec.frac_good_from_good <= 1.0);
        CHECK(*rec.frac_good_from_bad >= 0.0);
        CHECK(*rec.frac_good_from_bad <= 1.0);
    }
    std::string csv = lineage_csv(res.history);
    CHECK(csv.find("generation,frac_good_from_good,frac_good_from_bad") == 0);
}

TEST_CASE("search configuration is validated") {
    SearchConfig config;
    config.parents_k = 1;
    CHECK_THROWS_AS(run_search(example_log(), config), DomainError);
    config.parents_k = 2;
    config.population_size = 1;
    CHECK_THROWS_AS(run_search(example_log(), config), DomainError);
    config.population_size = 4;
    CHECK_THROWS_AS(run_search(EventLog{}, config), DomainError);
}
