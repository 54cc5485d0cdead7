#include "sgmine/relevance.hpp"

#include <cmath>

#include "sgmine/errors.hpp"

namespace sgmine {

namespace {

double binary_entropy(double rho) {
    double h = 0.0;
    if (rho > 0.0) h -= rho * std::log2(rho);
    if (rho < 1.0) h -= (1.0 - rho) * std::log2(1.0 - rho);
    return h;
}

} // namespace

double background_bits(const Trace& t, std::size_t alphabet_size) {
    return static_cast<double>(t.size() + 1) * std::log2(static_cast<double>(alphabet_size) + 1.0);
}

RelevanceReport entropic_relevance(const EventLog& log,
                                   const std::function<double(const Trace&)>& trace_prob) {
    if (log.empty()) throw DomainError("relevance of an empty log");

    const std::size_t alphabet_size = log.alphabet().size();
    const double total = static_cast<double>(log.total_traces());

    RelevanceReport report;
    std::uint64_t covered = 0;
    for (const auto& [trace, mult] : log.variants()) {
        double p = trace_prob(trace);
        if (p > 0.0) {
            covered += mult;
            report.covered_bits += static_cast<double>(mult) * -std::log2(p);
        } else {
            report.background_bits +=
                static_cast<double>(mult) * background_bits(trace, alphabet_size);
        }
    }
    report.coverage_rho = static_cast<double>(covered) / total;
    report.selector_bits = binary_entropy(report.coverage_rho);
    report.bits_per_trace =
        report.selector_bits + (report.covered_bits + report.background_bits) / total;
    return report;
}

RelevanceReport entropic_relevance(const EventLog& log, const Sdfa& model) {
    return entropic_relevance(log,
                              [&](const Trace& t) { return trace_probability(model, t); });
}

RelevanceReport entropic_relevance(const EventLog& log, const Sdag& model) {
    if (!is_deterministic(model))
        throw DomainError("relevance needs a deterministic graph");
    return entropic_relevance(log,
                              [&](const Trace& t) { return sdag_trace_probability(model, t); });
}

} // namespace sgmine
