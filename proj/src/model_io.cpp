#include "sgmine/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgmine/errors.hpp"

namespace sgmine {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

Sdfa sdfa_from_json(const json& j) {
    Sdfa a;
    std::map<json, int> index;
    if (!j.contains("states") || !j["states"].is_array())
        throw ParseError("automaton JSON needs a 'states' array");
    for (const auto& s : j["states"]) {
        index.emplace(s, static_cast<int>(index.size()));
    }
    a.delta.resize(index.size());
    if (!j.contains("initial")) throw ParseError("automaton JSON needs 'initial'");
    auto init = index.find(j["initial"]);
    if (init == index.end()) throw ParseError("initial state is not in 'states'");
    a.initial = init->second;
    if (j.contains("alphabet"))
        for (const auto& s : j["alphabet"]) a.alphabet.push_back(s.get<std::string>());
    for (const auto& t : j.value("transitions", json::array())) {
        auto from = index.find(t.at("from"));
        auto to = index.find(t.at("to"));
        if (from == index.end() || to == index.end())
            throw ParseError("transition endpoint is not in 'states'");
        std::string action = t.at("action").get<std::string>();
        double prob = t.at("prob").get<double>();
        if (a.delta[from->second].count(action))
            throw ParseError("duplicate transition for state/action pair");
        a.delta[from->second][action] = {to->second, prob};
        if (std::find(a.alphabet.begin(), a.alphabet.end(), action) == a.alphabet.end())
            a.alphabet.push_back(action);
    }
    validate(a);
    return a;
}

Sdag sdag_from_json(const json& j) {
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw ParseError("graph JSON needs a 'nodes' array");
    std::map<int, std::string> nodes;
    for (const auto& n : j["nodes"]) nodes[n.at("id").get<int>()] = n.at("label").get<std::string>();
    int input = j.at("input").get<int>();
    int output = j.at("output").get<int>();

    const json& arcs = j.value("arcs", json::array());
    bool all_probs = !arcs.empty();
    bool all_freqs = !arcs.empty();
    for (const auto& arc : arcs) {
        if (!arc.contains("prob")) all_probs = false;
        if (!arc.contains("freq")) all_freqs = false;
    }
    if (all_probs) {
        Sdag g;
        g.nodes = std::move(nodes);
        g.input = input;
        g.output = output;
        for (const auto& arc : arcs)
            g.arcs.push_back({arc.at("from").get<int>(), arc.at("to").get<int>(),
                              arc.at("prob").get<double>()});
        std::sort(g.arcs.begin(), g.arcs.end(), [](const Sdag::Arc& a, const Sdag::Arc& b) {
            return std::pair(a.from, a.to) < std::pair(b.from, b.to);
        });
        validate(g);
        return g;
    }
    if (all_freqs) {
        std::vector<FreqArc> freq_arcs;
        double case_count = 0.0;
        for (const auto& arc : arcs) {
            FreqArc fa{arc.at("from").get<int>(), arc.at("to").get<int>(),
                       arc.at("freq").get<double>()};
            if (fa.from == input) case_count += fa.freq;
            freq_arcs.push_back(fa);
        }
        return probabilities_from_frequencies(nodes, input, output, freq_arcs, case_count);
    }
    throw ParseError("graph arcs need 'prob' on every arc or 'freq' on every arc");
}

} // namespace

Model read_model_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) throw ParseError("model JSON must be an object");
    if (j.contains("states")) return sdfa_from_json(j);
    if (j.contains("nodes")) return sdag_from_json(j);
    throw ParseError("model JSON has neither 'states' nor 'nodes'");
}

std::string sdfa_to_json(const Sdfa& a) {
    json j;
    j["states"] = json::array();
    for (int s = 0; s < a.state_count(); ++s) j["states"].push_back(s);
    j["initial"] = a.initial;
    j["alphabet"] = a.alphabet;
    j["transitions"] = json::array();
    for (int s = 0; s < a.state_count(); ++s)
        for (const auto& [action, tr] : a.delta[s])
            j["transitions"].push_back(
                {{"from", s}, {"action", action}, {"to", tr.target}, {"prob", tr.prob}});
    return j.dump(2) + "\n";
}

namespace {

json sdag_json_base(const Sdag& g) {
    json j;
    j["nodes"] = json::array();
    for (const auto& [id, label] : g.nodes) j["nodes"].push_back({{"id", id}, {"label", label}});
    j["input"] = g.input;
    j["output"] = g.output;
    j["arcs"] = json::array();
    for (const auto& arc : g.arcs)
        j["arcs"].push_back({{"from", arc.from}, {"to", arc.to}, {"prob", arc.prob}});
    return j;
}

} // namespace

std::string sdag_to_json(const Sdag& g) { return sdag_json_base(g).dump(2) + "\n"; }

std::string annotated_sdag_to_json(const AnnotatedSdag& g) {
    json j = sdag_json_base(g.base);
    for (auto& arc : j["arcs"]) {
        auto key = std::pair(arc["from"].get<int>(), arc["to"].get<int>());
        arc["freq"] = g.arc_freq.at(key);
    }
    return j.dump(2) + "\n";
}

namespace {

std::string fmt(const char* pattern, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, value);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string sdfa_to_dot(const Sdfa& a) {
    std::ostringstream out;
    out << "digraph sdfa {\n  rankdir=LR;\n  start [shape=point];\n";
    for (int s = 0; s < a.state_count(); ++s)
        out << "  s" << s << " [shape=circle, label=" << quote(fmt("%.2f", termination_probability(a, s)))
            << "];\n";
    out << "  start -> s" << a.initial << ";\n";
    for (int s = 0; s < a.state_count(); ++s)
        for (const auto& [action, tr] : a.delta[s])
            out << "  s" << s << " -> s" << tr.target << " [label="
                << quote(action + " (" + fmt("%.2f", tr.prob) + ")") << "];\n";
    out << "}\n";
    return out.str();
}

namespace {

std::string sdag_dot(const Sdag& g, const AnnotatedSdag* ann) {
    std::ostringstream out;
    out << "digraph sdag {\n  rankdir=TB;\n  node [shape=box, style=rounded];\n";
    auto node_label = [&](int id, const std::string& base) {
        if (!ann) return base;
        double freq = id == g.input || id == g.output ? ann->case_count : ann->node_freq.at(id);
        return base + "\\n" + fmt("%.1f", freq);
    };
    out << "  n" << g.input << " [label=" << quote(node_label(g.input, "i")) << "];\n";
    out << "  n" << g.output << " [label=" << quote(node_label(g.output, "o")) << "];\n";
    for (const auto& [id, label] : g.nodes)
        out << "  n" << id << " [label=" << quote(node_label(id, label)) << "];\n";
    for (const auto& arc : g.arcs) {
        std::string label = fmt("%.2f", arc.prob);
        if (ann) label += "\\n(" + fmt("%.1f", ann->arc_freq.at({arc.from, arc.to})) + ")";
        out << "  n" << arc.from << " -> n" << arc.to << " [label=" << quote(label) << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace

std::string sdag_to_dot(const Sdag& g) { return sdag_dot(g, nullptr); }

std::string annotated_sdag_to_dot(const AnnotatedSdag& g) { return sdag_dot(g.base, &g); }

std::string relevance_report_to_json(const RelevanceReport& r) {
    json j;
    j["bitsPerTrace"] = r.bits_per_trace;
    j["coverageRho"] = r.coverage_rho;
    j["coveredBits"] = r.covered_bits;
    j["backgroundBits"] = r.background_bits;
    j["selectorBits"] = r.selector_bits;
    return j.dump();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

} // namespace sgmine
