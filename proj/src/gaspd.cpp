#include "sgmine/gaspd.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "sgmine/errors.hpp"
#include "sgmine/pat.hpp"
#include "sgmine/relevance.hpp"
#include "sgmine/sdag.hpp"

namespace sgmine {

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double default_t_max(const EventLog& log) {
    Pat pat(log);
    std::uint64_t best = 0;
    for (std::size_t id = 0; id < pat.node_count(); ++id)
        for (const auto& [action, edge] : pat.node(static_cast<int>(id)).children)
            best = std::max(best, edge.freq);
    return static_cast<double>(best);
}

namespace {

using ParamsKey = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

ParamsKey key_of(const AlergiaParams& p) {
    return {std::bit_cast<std::uint64_t>(p.omega), std::bit_cast<std::uint64_t>(p.t),
            std::bit_cast<std::uint64_t>(p.f)};
}

std::size_t resolve_threads(std::size_t configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("SGMINE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

AlergiaParams draw_params(const SearchConfig& config, double t_max, Rng& rng) {
    AlergiaParams p;
    p.omega = std::max(config.omega_min, uniform01(rng) * config.omega_max);
    p.t = uniform01(rng) * t_max;
    p.f = uniform01(rng);
    return p;
}

// Memoized, optionally parallel evaluator. Failed parameter triples are
// remembered as absent evaluations and their individuals discarded.
class Evaluator {
public:
    Evaluator(const EventLog& log, std::size_t threads) : log_(log), threads_(threads) {}

    void evaluate_all(std::vector<Individual>& individuals) {
        std::vector<ParamsKey> pending_keys;
        std::vector<AlergiaParams> pending;
        for (const auto& ind : individuals) {
            ParamsKey key = key_of(ind.params);
            std::lock_guard lock(mutex_);
            if (memo_.count(key)) continue;
            memo_.emplace(key, std::nullopt); // reserve so duplicates queue once
            pending_keys.push_back(key);
            pending.push_back(ind.params);
        }

        std::vector<std::optional<Evaluation>> results(pending.size());
        auto worker = [&](std::size_t begin) {
            for (std::size_t i = begin; i < pending.size(); i += threads_) {
                try {
                    results[i] = evaluate(log_, pending[i]);
                } catch (const std::exception&) {
                    results[i] = std::nullopt;
                }
            }
        };
        if (threads_ <= 1 || pending.size() <= 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t tid = 0; tid < std::min(threads_, pending.size()); ++tid)
                pool.emplace_back(worker, tid);
            for (auto& th : pool) th.join();
        }
        {
            std::lock_guard lock(mutex_);
            for (std::size_t i = 0; i < pending.size(); ++i) memo_[pending_keys[i]] = results[i];
        }

        std::vector<Individual> kept;
        kept.reserve(individuals.size());
        for (auto& ind : individuals) {
            auto it = memo_.find(key_of(ind.params));
            if (it->second.has_value()) {
                ind.eval = it->second;
                kept.push_back(std::move(ind));
            }
        }
        individuals.swap(kept);
    }

private:
    const EventLog& log_;
    std::size_t threads_;
    std::map<ParamsKey, std::optional<Evaluation>> memo_;
    std::mutex mutex_;
};

std::vector<std::size_t> sample_without_replacement(std::size_t count, std::size_t total,
                                                    Rng& rng) {
    std::vector<std::size_t> indices(total);
    for (std::size_t i = 0; i < total; ++i) indices[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform01(rng) *
                                                     static_cast<double>(total - i));
        if (j >= total) j = total - 1;
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    return indices;
}

// All crossover offspring of every unordered parent pair, each followed by
// its mutated twin; exact duplicates queue once.
std::vector<Individual> breed(const std::vector<Individual>& parents, const SearchConfig& config,
                              double t_max, Rng& rng) {
    std::vector<Individual> offspring;
    std::set<ParamsKey> seen;
    auto push = [&](const AlergiaParams& p) {
        if (seen.insert(key_of(p)).second) offspring.push_back(Individual{p, std::nullopt, false});
    };
    for (std::size_t i = 0; i < parents.size(); ++i) {
        for (std::size_t j = i + 1; j < parents.size(); ++j) {
            for (const auto& child : crossover(parents[i].params, parents[j].params)) {
                push(child);
                push(mutate(child, config, t_max, rng));
            }
        }
    }
    return offspring;
}

} // namespace

std::vector<Individual> init_population(const SearchConfig& config, double t_max, Rng& rng) {
    std::vector<Individual> population;
    std::set<ParamsKey> seen;
    for (std::size_t i = 0; i < config.population_size; ++i) {
        AlergiaParams p = draw_params(config, t_max, rng);
        for (int attempt = 0; attempt < 100 && seen.count(key_of(p)); ++attempt)
            p = draw_params(config, t_max, rng);
        seen.insert(key_of(p));
        population.push_back(Individual{p, std::nullopt, false});
    }
    return population;
}

std::vector<Individual> pareto_frontier(const std::vector<Individual>& points) {
    for (const auto& p : points)
        if (!p.eval) throw DomainError("frontier of unevaluated individuals");

    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = *points[a].eval;
        const auto& eb = *points[b].eval;
        return std::tuple(ea.size, ea.relevance, a) < std::tuple(eb.size, eb.relevance, b);
    });

    std::vector<bool> keep(points.size(), false);
    double best_rel = std::numeric_limits<double>::infinity();
    std::optional<Evaluation> last_kept;
    for (std::size_t idx : order) {
        const auto& e = *points[idx].eval;
        if (last_kept && last_kept->size == e.size && last_kept->relevance == e.relevance)
            continue; // duplicate objectives: first in order wins
        if (e.relevance < best_rel) {
            keep[idx] = true;
            best_rel = e.relevance;
            last_kept = e;
        }
    }

    std::vector<Individual> frontier;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (keep[i]) frontier.push_back(points[i]);
    return frontier;
}

std::vector<AlergiaParams> crossover(const AlergiaParams& p1, const AlergiaParams& p2) {
    const double w1 = p1.omega, t1 = p1.t, f1 = p1.f;
    const double w2 = p2.omega, t2 = p2.t, f2 = p2.f;
    return {
        {w1, t2, f2}, {w2, t1, f1}, // single point, position one
        {w1, t1, f2}, {w2, t2, f1}, // single point, position two
        {w1, t1, f1}, {w2, t2, f2}, // single point, position three
        {w1, t2, f1}, {w2, t1, f2}, // double point
    };
}

AlergiaParams mutate(const AlergiaParams& p, const SearchConfig& config, double t_max, Rng& rng) {
    auto delta = [&](double range) {
        return (2.0 * uniform01(rng) - 1.0) * config.mutation_scale * range;
    };
    AlergiaParams out;
    out.omega = std::clamp(p.omega + delta(config.omega_max - config.omega_min),
                           config.omega_min, config.omega_max);
    out.t = std::clamp(p.t + delta(t_max), 0.0, t_max);
    out.f = std::clamp(p.f + delta(1.0), 0.0, 1.0);
    return out;
}

Evaluation evaluate(const EventLog& log, const AlergiaParams& params) {
    Sdfa model = run_alergia(log, params);
    Sdag graph = sdag_of_sdfa(model);
    return {model_size(graph), entropic_relevance(log, graph).bits_per_trace};
}

SearchResult run_search(const EventLog& log, const SearchConfig& config) {
    if (log.empty()) throw DomainError("cannot search over an empty log");
    if (config.population_size < 2) throw DomainError("population size must be at least 2");
    if (config.parents_k < 2) throw DomainError("parents_k must be at least 2");

    const double t_max = config.t_max ? *config.t_max : default_t_max(log);
    Rng rng(config.rng_seed);
    Evaluator evaluator(log, resolve_threads(config.threads));

    std::vector<Individual> population = init_population(config, t_max, rng);
    evaluator.evaluate_all(population);

    std::vector<Individual> archive; // every individual that ever made a frontier
    std::set<ParamsKey> archived;
    std::vector<Individual> bad_pool; // evaluated but so far never good
    std::set<ParamsKey> bad_seen;

    auto note_bad = [&](const std::vector<Individual>& inds) {
        for (const auto& ind : inds) {
            ParamsKey key = key_of(ind.params);
            if (!archived.count(key) && bad_seen.insert(key).second) bad_pool.push_back(ind);
        }
    };

    auto mark_good = [&](const std::vector<Individual>& frontier) {
        std::size_t fresh = 0;
        for (const auto& ind : frontier) {
            ParamsKey key = key_of(ind.params);
            if (archived.insert(key).second) {
                Individual archived_ind = ind;
                archived_ind.ever_good = true;
                archive.push_back(archived_ind);
                ++fresh;
            }
        }
        return fresh;
    };

    SearchHistory history;
    for (std::size_t g = 0; g < config.generations; ++g) {
        std::vector<Individual> frontier = pareto_frontier(population);
        GenerationRecord record;
        record.new_good = mark_good(frontier);
        note_bad(population);
        for (auto& ind : frontier) ind.ever_good = true;
        record.frontier = frontier;

        std::vector<std::size_t> picks =
            sample_without_replacement(std::min(config.parents_k, frontier.size()),
                                       frontier.size(), rng);
        std::vector<Individual> parents;
        for (std::size_t idx : picks) parents.push_back(frontier[idx]);

        std::vector<Individual> offspring = breed(parents, config, t_max, rng);
        evaluator.evaluate_all(offspring);

        std::vector<Individual> bad_offspring;
        if (config.lineage_experiment) {
            std::vector<Individual> current_bad;
            for (const auto& ind : bad_pool)
                if (!archived.count(key_of(ind.params))) current_bad.push_back(ind);
            std::vector<std::size_t> bad_picks = sample_without_replacement(
                std::min(config.parents_k, current_bad.size()), current_bad.size(), rng);
            std::vector<Individual> bad_parents;
            for (std::size_t idx : bad_picks) bad_parents.push_back(current_bad[idx]);
            bad_offspring = breed(bad_parents, config, t_max, rng);
            evaluator.evaluate_all(bad_offspring);
        }

        // An offspring is good when it lands on the frontier of the archive
        // plus its own cohort.
        auto good_subset = [&](const std::vector<Individual>& cohort) {
            std::vector<Individual> combined = archive;
            combined.insert(combined.end(), cohort.begin(), cohort.end());
            std::vector<Individual> front = pareto_frontier(combined);
            std::set<ParamsKey> front_keys;
            for (const auto& ind : front) front_keys.insert(key_of(ind.params));
            std::vector<Individual> good;
            for (const auto& ind : cohort)
                if (front_keys.count(key_of(ind.params))) good.push_back(ind);
            return good;
        };

        std::vector<Individual> good_offspring = good_subset(offspring);
        if (config.lineage_experiment) {
            record.frac_good_from_good =
                offspring.empty() ? 0.0
                                  : static_cast<double>(good_offspring.size()) /
                                        static_cast<double>(offspring.size());
            std::vector<Individual> good_bad = good_subset(bad_offspring);
            record.frac_good_from_bad =
                bad_offspring.empty() ? 0.0
                                      : static_cast<double>(good_bad.size()) /
                                            static_cast<double>(bad_offspring.size());
            note_bad(bad_offspring);
        }
        note_bad(offspring);
        history.per_generation.push_back(std::move(record));

        std::vector<Individual> next = archive;
        std::set<ParamsKey> next_keys = archived;
        for (const auto& ind : good_offspring)
            if (next_keys.insert(key_of(ind.params)).second) next.push_back(ind);
        population.swap(next);
    }

    std::vector<Individual> final_frontier = pareto_frontier(population);
    mark_good(final_frontier);
    for (auto& ind : final_frontier) ind.ever_good = true;
    return {std::move(final_frontier), std::move(history)};
}

namespace {

void append_row(std::ostringstream& out, std::size_t generation, const Individual& ind) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%.6f,%zu,%.6f,%d\n", generation,
                  ind.params.omega, ind.params.t, ind.params.f, ind.eval->size,
                  ind.eval->relevance, ind.ever_good ? 1 : 0);
    out << buf;
}

std::vector<Individual> sorted_rows(std::vector<Individual> rows) {
    std::sort(rows.begin(), rows.end(), [](const Individual& a, const Individual& b) {
        return std::tuple(a.eval->size, a.eval->relevance, a.params.omega, a.params.t,
                          a.params.f) < std::tuple(b.eval->size, b.eval->relevance,
                                                   b.params.omega, b.params.t, b.params.f);
    });
    return rows;
}

} // namespace

std::string frontier_csv(const std::vector<Individual>& frontier, std::size_t generation) {
    std::ostringstream out;
    out << "generation,omega,t,f,size,relevance,ever_good\n";
    for (const auto& ind : sorted_rows(frontier)) append_row(out, generation, ind);
    return out.str();
}

std::string history_csv(const SearchHistory& history) {
    std::ostringstream out;
    out << "generation,omega,t,f,size,relevance,ever_good\n";
    for (std::size_t g = 0; g < history.per_generation.size(); ++g)
        for (const auto& ind : sorted_rows(history.per_generation[g].frontier))
            append_row(out, g + 1, ind);
    return out.str();
}

std::string lineage_csv(const SearchHistory& history) {
    std::ostringstream out;
    out << "generation,frac_good_from_good,frac_good_from_bad\n";
    for (std::size_t g = 0; g < history.per_generation.size(); ++g) {
        const auto& rec = history.per_generation[g];
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f\n", g + 1,
                      rec.frac_good_from_good.value_or(0.0),
                      rec.frac_good_from_bad.value_or(0.0));
        out << buf;
    }
    return out.str();
}

} // namespace sgmine
