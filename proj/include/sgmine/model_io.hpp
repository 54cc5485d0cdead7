#pragma once

#include <optional>
#include <string>
#include <variant>

#include "sgmine/relevance.hpp"
#include "sgmine/sdag.hpp"
#include "sgmine/sdfa.hpp"

namespace sgmine {

using Model = std::variant<Sdfa, Sdag>;

// Kind is inferred from the JSON shape: objects with "states" are automata,
// objects with "nodes" are action graphs. Graph arcs may carry probabilities,
// frequencies, or both; with frequencies alone, probabilities are derived and
// the case count is the input node's outflow.
Model read_model_json(const std::string& text);

std::string sdfa_to_json(const Sdfa& a);
std::string sdag_to_json(const Sdag& g);
std::string annotated_sdag_to_json(const AnnotatedSdag& g);

// Circles labeled with termination probability, edges "action (prob)".
std::string sdfa_to_dot(const Sdfa& a);
// Rounded boxes; frequencies, when present, rounded to one decimal place.
std::string sdag_to_dot(const Sdag& g);
std::string annotated_sdag_to_dot(const AnnotatedSdag& g);

std::string relevance_report_to_json(const RelevanceReport& r);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sgmine
