#pragma once

#include <functional>

#include "sgmine/eventlog.hpp"
#include "sgmine/sdag.hpp"
#include "sgmine/sdfa.hpp"

namespace sgmine {

// Compression cost of a log under a stochastic model, in bits per trace:
// a one-bit-optimal selector between model coverage and a uniform background
// coder, plus the per-trace costs of each route.
struct RelevanceReport {
    double bits_per_trace = 0.0;
    double coverage_rho = 0.0;   // fraction of trace instances the model covers
    double covered_bits = 0.0;   // total -log2 P(t) over covered instances
    double background_bits = 0.0;
    double selector_bits = 0.0;  // binary entropy of the coverage split
};

// Cost of coding one trace with the uniform background model: each event and
// one terminator drawn from alphabet_size + 1 equiprobable symbols.
double background_bits(const Trace& t, std::size_t alphabet_size);

RelevanceReport entropic_relevance(const EventLog& log, const Sdfa& model);

// The graph must be deterministic.
RelevanceReport entropic_relevance(const EventLog& log, const Sdag& model);

// Shared core over any trace-probability function.
RelevanceReport entropic_relevance(const EventLog& log,
                                   const std::function<double(const Trace&)>& trace_prob);

} // namespace sgmine
