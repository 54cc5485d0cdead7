#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sgmine/alergia.hpp"
#include "sgmine/eventlog.hpp"

namespace sgmine {

struct Evaluation {
    std::size_t size = 0;
    double relevance = 0.0;
};

struct Individual {
    AlergiaParams params;
    std::optional<Evaluation> eval;
    bool ever_good = false;
};

struct SearchConfig {
    std::size_t population_size = 50;
    std::size_t generations = 50;
    std::size_t parents_k = 0;      // required, no blessed default
    double omega_max = 15.0;
    double omega_min = 1e-9;
    std::optional<double> t_max;    // default: most frequent prefix-tree branch
    double mutation_scale = 0.1;    // delta range as a fraction of each bound range
    std::uint64_t rng_seed = 0;
    bool lineage_experiment = false;
    std::size_t threads = 0;        // 0: SGMINE_THREADS or hardware concurrency
};

struct GenerationRecord {
    std::vector<Individual> frontier;
    std::size_t new_good = 0;
    // Lineage experiment only: fraction of offspring judged good, per parent class.
    std::optional<double> frac_good_from_good;
    std::optional<double> frac_good_from_bad;
};

struct SearchHistory {
    std::vector<GenerationRecord> per_generation;
};

struct SearchResult {
    std::vector<Individual> frontier;
    SearchHistory history;
};

using Rng = std::mt19937_64;

// Uniform draw in [0, 1) built directly from the generator output so that
// sequences are stable across standard libraries.
double uniform01(Rng& rng);

std::vector<Individual> init_population(const SearchConfig& config, double t_max, Rng& rng);

// The strictly-non-dominated subset under (size, relevance) minimization;
// of individuals with equal objectives only the first in input order is kept.
std::vector<Individual> pareto_frontier(const std::vector<Individual>& points);

// The eight single- and double-point recombinations of two parameter triples.
std::vector<AlergiaParams> crossover(const AlergiaParams& p1, const AlergiaParams& p2);

AlergiaParams mutate(const AlergiaParams& p, const SearchConfig& config, double t_max, Rng& rng);

// Learns a model for the parameters and scores it: size and relevance of the
// action graph of the learned automaton.
Evaluation evaluate(const EventLog& log, const AlergiaParams& params);

SearchResult run_search(const EventLog& log, const SearchConfig& config);

// Largest edge frequency in the unfiltered prefix tree; the default upper
// bound for t draws.
double default_t_max(const EventLog& log);

std::string frontier_csv(const std::vector<Individual>& frontier, std::size_t generation);
std::string history_csv(const SearchHistory& history);
std::string lineage_csv(const SearchHistory& history);

} // namespace sgmine
