// Command-line front end: validate/induce/similarity/compose/select/generate/
// experiment over CP-Net JSON files.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or syntax trouble,
// 3 infeasible composition/selection.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cpnet/compose.hpp"
#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"
#include "cpnet/experiment.hpp"
#include "cpnet/generator.hpp"
#include "cpnet/induced.hpp"
#include "cpnet/io.hpp"
#include "cpnet/selection.hpp"
#include "cpnet/similarity.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code_for(cpnet::ErrorCode code) {
    switch (code) {
        case cpnet::ErrorCode::IoError:
        case cpnet::ErrorCode::SyntaxError:
            return 2;
        case cpnet::ErrorCode::NotComposable:
        case cpnet::ErrorCode::NoComposableSubset:
            return 3;
        default:
            return 1;
    }
}

cpnet::CapacityConstraint parse_capacity(const std::string& spec) {
    cpnet::CapacityConstraint cap;
    if (spec.empty()) return cap;
    cap.enabled = true;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        std::string item = spec.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            cpnet::fail(cpnet::ErrorCode::InvalidInput, "--cap expects attr=level pairs, got '" + item + "'");
        try {
            cap.max_level[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
            cpnet::fail(cpnet::ErrorCode::InvalidInput, "bad level in --cap item '" + item + "'");
        }
        pos = comma + 1;
    }
    return cap;
}

std::vector<cpnet::Consumer> load_consumer_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) cpnet::fail(cpnet::ErrorCode::IoError, "'" + dir + "' is not a directory");
    std::vector<fs::path> paths;
    for (const fs::directory_entry& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".cpnet") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    std::vector<cpnet::Consumer> consumers;
    for (const fs::path& path : paths)
        consumers.push_back(cpnet::Consumer{path.stem().string(), cpnet::load_cpnet(path.string())});
    if (consumers.empty()) cpnet::fail(cpnet::ErrorCode::InvalidInput, "no .cpnet files in '" + dir + "'");
    return consumers;
}

void print_selection(const cpnet::SelectionResult& result) {
    cpnet::Json j;
    j["strategy"] = cpnet::to_string(result.strategy);
    j["threshold"] = result.threshold;
    j["chosen"] = result.chosen;
    j["score"] = result.score.value;
    j["identical"] = result.score.identical;
    j["elapsed_ms"] = result.elapsed_ms;
    j["candidates_examined"] = result.candidates_examined;
    std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CP-Net toolkit: validation, induced graphs, similarity, composition, selection"};
    app.require_subcommand(1);

    // validate
    std::string validate_path;
    CLI::App* cmd_validate = app.add_subcommand("validate", "check a CP-Net file and report violations");
    cmd_validate->add_option("file", validate_path, "CP-Net file")->required();

    // induce
    std::string induce_path;
    std::size_t induce_cap = cpnet::kDefaultMaxOutcomes;
    CLI::App* cmd_induce = app.add_subcommand("induce", "print the induced preference graph as an edge list");
    cmd_induce->add_option("file", induce_path, "CP-Net file")->required();
    cmd_induce->add_option("--max-outcomes", induce_cap, "outcome-space cap");

    // similarity
    std::string sim_method = "induced";
    std::vector<std::string> sim_files;
    CLI::App* cmd_similarity = app.add_subcommand("similarity", "score two CP-Nets against each other");
    cmd_similarity->add_option("--method", sim_method, "induced|cpt|pattern")
        ->check(CLI::IsMember({"induced", "cpt", "pattern"}));
    cmd_similarity->add_option("files", sim_files, "two CP-Net files")->expected(2);

    // compose
    std::string compose_out;
    std::vector<std::string> compose_inputs;
    CLI::App* cmd_compose = app.add_subcommand("compose", "compose two or more CP-Nets into one");
    cmd_compose->add_option("--out", compose_out, "output CP-Net file")->required();
    cmd_compose->add_option("files", compose_inputs, "input CP-Net files")->expected(-1)->required();

    // select
    std::string select_strategy = "brute";
    double select_threshold = 0.2;
    std::string select_provider;
    std::string select_consumers;
    std::string select_cap;
    std::size_t select_limit = 20;
    CLI::App* cmd_select = app.add_subcommand("select", "pick the consumer subset most similar to a provider");
    cmd_select->add_option("--strategy", select_strategy, "brute|greedy|heuristic")
        ->check(CLI::IsMember({"brute", "greedy", "heuristic"}));
    cmd_select->add_option("--threshold", select_threshold, "heuristic prefilter threshold in [0,1]");
    cmd_select->add_option("--provider", select_provider, "provider CP-Net file")->required();
    cmd_select->add_option("--consumers", select_consumers, "directory of consumer .cpnet files")->required();
    cmd_select->add_option("--cap", select_cap, "capacity ceiling, e.g. cpu=3,memory=2");
    cmd_select->add_option("--limit", select_limit, "max consumers for exhaustive scans");

    // generate
    std::uint64_t gen_seed = 0;
    int gen_count = 10;
    cpnet::GeneratorConfig gen_cfg;
    std::string gen_out;
    std::string gen_shape = "chain";
    bool gen_subset_orders = false;
    CLI::App* cmd_generate = app.add_subcommand("generate", "write a seeded provider, consumer pool and table");
    cmd_generate->add_option("--seed", gen_seed, "base seed")->required();
    cmd_generate->add_option("--count", gen_count, "number of consumers");
    cmd_generate->add_option("--attrs", gen_cfg.attribute_count, "attribute count");
    cmd_generate->add_option("--levels", gen_cfg.levels_per_attribute, "semantic levels per attribute");
    cmd_generate->add_option("--domain-size", gen_cfg.domain_size, "raw numeric units per attribute");
    cmd_generate->add_option("--shape", gen_shape, "chain|random_dag")
        ->check(CLI::IsMember({"chain", "random_dag"}));
    cmd_generate->add_flag("--subset-orders", gen_subset_orders, "rank random subsets instead of all levels");
    cmd_generate->add_option("--clone-rate", gen_cfg.clone_rate, "chance a consumer clones the provider");
    cmd_generate->add_option("--graph-mutation-rate", gen_cfg.graph_mutation_rate,
                             "chance a consumer redraws its structure");
    cmd_generate->add_option("--row-mutation-rate", gen_cfg.row_mutation_rate,
                             "chance a kept row redraws its order");
    cmd_generate->add_option("--out", gen_out, "output directory")->required();

    // experiment
    std::string exp_config;
    std::string exp_out;
    std::string exp_format = "csv";
    CLI::App* cmd_experiment = app.add_subcommand("experiment", "run the Monte Carlo accuracy/runtime study");
    cmd_experiment->add_option("--config", exp_config, "JSON config (defaults apply when omitted)");
    cmd_experiment->add_option("--out", exp_out, "report file")->required();
    cmd_experiment->add_option("--format", exp_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);

        if (*cmd_validate) {
            cpnet::CpNet cp = cpnet::load_cpnet(validate_path, /*validated=*/false);
            std::vector<cpnet::Violation> violations = cpnet::validate(cp);
            if (violations.empty()) {
                std::cout << "valid\n";
                return 0;
            }
            for (const cpnet::Violation& v : violations)
                std::cout << cpnet::to_string(v.code) << " " << (v.attribute.empty() ? "-" : v.attribute) << ": "
                          << v.message << "\n";
            return 1;
        }

        if (*cmd_induce) {
            cpnet::CpNet cp = cpnet::load_cpnet(induce_path);
            cpnet::InducedGraph graph = cpnet::induced_graph(cp, induce_cap);
            for (const auto& [worse, better] : graph.edges)
                std::cout << cpnet::render_outcome(cp.table, cpnet::decode_outcome(worse, graph.attribute_count))
                          << " -> "
                          << cpnet::render_outcome(cp.table, cpnet::decode_outcome(better, graph.attribute_count))
                          << "\n";
            return 0;
        }

        if (*cmd_similarity) {
            cpnet::CpNet a = cpnet::load_cpnet(sim_files[0]);
            cpnet::CpNet b = cpnet::load_cpnet(sim_files[1]);
            cpnet::SimilarityScore score;
            if (sim_method == "induced") score = cpnet::induced_similarity(a, b);
            else if (sim_method == "cpt") score = cpnet::cpt_similarity(a, b);
            else score = cpnet::relative_similarity(a, b);
            std::printf("score=%.6f identical=%s\n", score.value, score.identical ? "true" : "false");
            return 0;
        }

        if (*cmd_compose) {
            std::vector<cpnet::CpNet> inputs;
            for (const std::string& path : compose_inputs) inputs.push_back(cpnet::load_cpnet(path));
            cpnet::CpNet composed = cpnet::compose_all(inputs);
            cpnet::save_cpnet(compose_out, composed);
            std::cout << "composed " << inputs.size() << " nets -> " << compose_out << "\n";
            return 0;
        }

        if (*cmd_select) {
            cpnet::CpNet provider = cpnet::load_cpnet(select_provider);
            std::vector<cpnet::Consumer> consumers = load_consumer_dir(select_consumers);
            cpnet::CapacityConstraint cap = parse_capacity(select_cap);
            cpnet::SelectionResult result;
            if (select_strategy == "brute")
                result = cpnet::brute_force_select(provider, consumers, cap, select_limit);
            else if (select_strategy == "greedy")
                result = cpnet::greedy_select(provider, consumers, cap);
            else
                result = cpnet::heuristic_select(provider, consumers, select_threshold, cap, select_limit);
            print_selection(result);
            return 0;
        }

        if (*cmd_generate) {
            gen_cfg.graph_shape = gen_shape == "chain" ? cpnet::GraphShape::Chain : cpnet::GraphShape::RandomDag;
            gen_cfg.complete_orders = !gen_subset_orders;
            fs::create_directories(gen_out);
            gen_cfg.seed = cpnet::detail::mix_seed(gen_seed, 1);
            cpnet::SemanticTable table = cpnet::random_semantic_table(gen_cfg);
            gen_cfg.seed = cpnet::detail::mix_seed(gen_seed, 2);
            cpnet::CpNet provider = cpnet::random_cpnet(table, gen_cfg);
            cpnet::save_table((fs::path(gen_out) / "table.json").string(), table);
            cpnet::save_cpnet((fs::path(gen_out) / "provider.cpnet").string(), provider);
            for (int i = 0; i < gen_count; ++i) {
                std::mt19937_64 rng(cpnet::detail::mix_seed(gen_seed, 1000 + static_cast<std::uint64_t>(i)));
                cpnet::CpNet consumer = cpnet::random_consumer(provider, gen_cfg, rng);
                char name[32];
                std::snprintf(name, sizeof(name), "consumer_%02d.cpnet", i);
                cpnet::save_cpnet((fs::path(gen_out) / name).string(), consumer);
            }
            std::cout << "wrote table + provider + " << gen_count << " consumers to " << gen_out << "\n";
            return 0;
        }

        if (*cmd_experiment) {
            cpnet::ExperimentConfig cfg;
            if (!exp_config.empty())
                cfg = cpnet::experiment_config_from_json(cpnet::parse_json_text(cpnet::read_text_file(exp_config)));
            std::vector<cpnet::ReportRow> rows = cpnet::run_experiment(cfg);
            cpnet::emit_report(rows, exp_format == "csv" ? cpnet::ReportFormat::Csv : cpnet::ReportFormat::Json,
                               exp_out);
            std::cout << "wrote " << rows.size() << " rows to " << exp_out << "\n";
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const cpnet::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
