#include "sgmine/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgmine/alergia.hpp"
#include "sgmine/errors.hpp"
#include "sgmine/eventlog.hpp"
#include "sgmine/gaspd.hpp"
#include "sgmine/model_io.hpp"
#include "sgmine/relevance.hpp"
#include "sgmine/sdag.hpp"

namespace sgmine {

namespace {

EventLog load_log(const std::string& path) {
    std::string text = read_text_file(path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".xes") == 0)
        return parse_xes(text);
    return parse_log(text);
}

std::string model_basename(const Evaluation& eval) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "model_size%zu_rel%.6f", eval.size, eval.relevance);
    return buf;
}

int cmd_discover(const std::string& log_path, double omega, double t, double f,
                 const std::string& out_path, const std::string& format) {
    EventLog log = load_log(log_path);
    Sdfa model = run_alergia(log, {omega, t, f});
    Sdag graph = sdag_of_sdfa(model);

    std::string payload;
    if (format == "sdfa-json") payload = sdfa_to_json(model);
    else if (format == "sdag-json") payload = sdag_to_json(graph);
    else payload = sdag_to_dot(graph);
    write_text_file(out_path, payload);

    nlohmann::json line;
    line["size"] = model_size(graph);
    line["relevance"] = entropic_relevance(log, graph).bits_per_trace;
    std::cout << line.dump() << "\n";
    return 0;
}

int cmd_search(const std::string& log_path, const SearchConfig& config,
               const std::string& out_dir) {
    EventLog log = load_log(log_path);
    SearchResult result = run_search(log, config);

    std::filesystem::create_directories(out_dir);
    auto path = [&](const std::string& name) { return out_dir + "/" + name; };
    write_text_file(path("frontier.csv"),
                    frontier_csv(result.frontier, result.history.per_generation.size()));
    write_text_file(path("history.csv"), history_csv(result.history));
    if (config.lineage_experiment)
        write_text_file(path("lineage.csv"), lineage_csv(result.history));

    for (const auto& ind : result.frontier) {
        Sdfa model = run_alergia(log, ind.params);
        Sdag graph = sdag_of_sdfa(model);
        std::string base = model_basename(*ind.eval);
        write_text_file(path(base + ".json"), sdag_to_json(graph));
        write_text_file(path(base + ".dot"), sdag_to_dot(graph));
    }
    std::cout << "frontier size: " << result.frontier.size() << "\n";
    return 0;
}

int cmd_score(const std::string& log_path, const std::string& model_path) {
    EventLog log = load_log(log_path);
    Model model = read_model_json(read_text_file(model_path));
    RelevanceReport report;
    if (std::holds_alternative<Sdfa>(model))
        report = entropic_relevance(log, std::get<Sdfa>(model));
    else
        report = entropic_relevance(log, std::get<Sdag>(model));
    std::cout << relevance_report_to_json(report) << "\n";
    std::fprintf(stderr, "%.3f bits per trace, coverage %.3f\n", report.bits_per_trace,
                 report.coverage_rho);
    return 0;
}

int cmd_convert(const std::string& in_path, const std::string& to, const std::string& out_path) {
    Model model = read_model_json(read_text_file(in_path));
    std::string payload;
    if (to == "sdag") {
        if (!std::holds_alternative<Sdfa>(model))
            throw DomainError("sdag conversion expects an automaton input");
        payload = sdag_to_json(sdag_of_sdfa(std::get<Sdfa>(model)));
    } else if (to == "dfg") {
        Sdag graph = std::holds_alternative<Sdfa>(model)
                         ? sdag_of_sdfa(std::get<Sdfa>(model))
                         : std::get<Sdag>(model);
        payload = sdag_to_json(reduce_to_dfg(graph));
    } else { // sfa
        if (!std::holds_alternative<Sdag>(model))
            throw DomainError("sfa conversion expects a graph input");
        payload = sdfa_to_json(sfa_of_sdag(std::get<Sdag>(model)));
    }
    write_text_file(out_path, payload);
    return 0;
}

int cmd_annotate(const std::string& in_path, double cases, const std::string& out_path) {
    Model model = read_model_json(read_text_file(in_path));
    if (!std::holds_alternative<Sdag>(model))
        throw DomainError("annotation expects a graph input");
    AnnotatedSdag ann = annotate_frequencies(std::get<Sdag>(model), cases);
    write_text_file(out_path, annotated_sdag_to_json(ann));
    return 0;
}

int cmd_export(const std::string& in_path, const std::string& out_path) {
    Model model = read_model_json(read_text_file(in_path));
    std::string payload = std::holds_alternative<Sdfa>(model)
                              ? sdfa_to_dot(std::get<Sdfa>(model))
                              : sdag_to_dot(std::get<Sdag>(model));
    write_text_file(out_path, payload);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"stochastic process discovery from event logs"};
    app.require_subcommand(1);

    std::string log_path, model_path, in_path, out_path, out_dir;
    double omega = 1.0, t = 1.0, f = 1.0, cases = 0.0;
    std::string format = "sdag-json", to;

    auto* discover = app.add_subcommand("discover", "learn one model from a log");
    discover->add_option("--log", log_path, "event log file")->required();
    discover->add_option("--omega", omega, "compatibility bound multiplier")->required();
    discover->add_option("--t", t, "minimum arrival frequency")->required();
    discover->add_option("--f", f, "trace-frequency filter threshold")->required();
    discover->add_option("--out", out_path, "output model file")->required();
    discover->add_option("--format", format, "sdfa-json|sdag-json|dot")
        ->check(CLI::IsMember({"sdfa-json", "sdag-json", "dot"}));

    SearchConfig config;
    auto* search = app.add_subcommand("search", "genetic search over inference parameters");
    search->add_option("--log", log_path)->required();
    search->add_option("--pop", config.population_size, "population size");
    search->add_option("--gens", config.generations, "number of generations");
    search->add_option("--parents", config.parents_k, "parents per generation")->required();
    search->add_option("--seed", config.rng_seed, "random seed");
    search->add_option("--out-dir", out_dir, "output directory")->required();
    search->add_option("--omega-max", config.omega_max, "upper bound for omega draws");
    double t_max_flag = -1.0;
    search->add_option("--t-max", t_max_flag, "upper bound for t draws");
    search->add_option("--mutation-scale", config.mutation_scale,
                       "mutation delta as a fraction of each range");
    search->add_option("--threads", config.threads, "evaluation worker cap");
    search->add_flag("--lineage-experiment", config.lineage_experiment,
                     "also breed from never-good parents and record statistics");

    auto* score = app.add_subcommand("score", "entropic relevance of a model to a log");
    score->add_option("--log", log_path)->required();
    score->add_option("--model", model_path)->required();

    auto* convert = app.add_subcommand("convert", "convert between model kinds");
    convert->add_option("--in", in_path)->required();
    convert->add_option("--to", to)->required()->check(CLI::IsMember({"sdag", "dfg", "sfa"}));
    convert->add_option("--out", out_path)->required();

    auto* annotate = app.add_subcommand("annotate", "derive arc frequencies from probabilities");
    annotate->add_option("--in", in_path)->required();
    annotate->add_option("--cases", cases, "number of cases flowing through the graph")
        ->required();
    annotate->add_option("--out", out_path)->required();

    auto* exporter = app.add_subcommand("export", "render a model as DOT");
    exporter->add_option("--in", in_path)->required();
    exporter->add_option("--out", out_path)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (discover->parsed()) return cmd_discover(log_path, omega, t, f, out_path, format);
        if (search->parsed()) {
            if (t_max_flag >= 0.0) config.t_max = t_max_flag;
            return cmd_search(log_path, config, out_dir);
        }
        if (score->parsed()) return cmd_score(log_path, model_path);
        if (convert->parsed()) return cmd_convert(in_path, to, out_path);
        if (annotate->parsed()) return cmd_annotate(in_path, cases, out_path);
        if (exporter->parsed()) return cmd_export(in_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace sgmine
