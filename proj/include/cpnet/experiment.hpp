#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cpnet/error.hpp"
#include "cpnet/generator.hpp"
#include "cpnet/io.hpp"
#include "cpnet/selection.hpp"

namespace cpnet {

/// Monte Carlo study configuration. One run draws a provider and a consumer
/// pool from the same seed stream; each requested consumer count slices a
/// prefix of that pool, so results across counts stay comparable within a
/// run. Seeds derive as base_seed + run_id.
struct ExperimentConfig {
    int runs = 100;
    std::vector<int> consumer_counts = {4, 6, 8, 10, 12};
    std::vector<double> thresholds = {0.15, 0.20, 0.25};
    std::vector<Strategy> strategies = {Strategy::BruteForce, Strategy::Greedy, Strategy::Heuristic};
    std::uint64_t base_seed = 1;
    int brute_force_limit = 12;   // counts above this skip the exhaustive scan
    bool measure_time = true;     // false pins elapsed_ms to 0 for reproducible reports
    CapacityConstraint capacity;
    GeneratorConfig generator;    // seed field is overridden per run
};

struct ReportRow {
    int run_id = 0;
    Strategy strategy = Strategy::BruteForce;
    double threshold = 0.0;
    int consumer_count = 0;
    double score = 0.0;
    double brute_force_score = -1.0;  // -1 when the exhaustive baseline was skipped
    double accuracy = -1.0;           // score / brute_force_score; -1 without a baseline
    double elapsed_ms = 0.0;
    std::uint64_t candidates_examined = 0;
};

enum class ReportFormat { Csv, Json };

inline constexpr const char* kReportHeader =
    "run_id,strategy,threshold,consumer_count,score,brute_force_score,accuracy,elapsed_ms,candidates_examined";

namespace detail {

inline double accuracy_against(double score, bool saturated, double brute_score, bool brute_saturated) {
    if (saturated && brute_saturated) return 1.0;
    if (brute_score == 0.0) return score == 0.0 ? 1.0 : 0.0;
    return score / brute_score;
}

inline std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const ReportRow& row) {
    std::string out;
    out += std::to_string(row.run_id);
    out += ',';
    out += to_string(row.strategy);
    out += ',';
    out += detail::format_double(row.threshold);
    out += ',';
    out += std::to_string(row.consumer_count);
    out += ',';
    out += detail::format_double(row.score);
    out += ',';
    out += detail::format_double(row.brute_force_score);
    out += ',';
    out += detail::format_double(row.accuracy);
    out += ',';
    out += detail::format_double(row.elapsed_ms);
    out += ',';
    out += std::to_string(row.candidates_examined);
    return out;
}

inline Strategy strategy_from_string(const std::string& name) {
    if (name == "brute") return Strategy::BruteForce;
    if (name == "greedy") return Strategy::Greedy;
    if (name == "heuristic") return Strategy::Heuristic;
    fail(ErrorCode::InvalidInput, "unknown strategy '" + name + "'");
}

/// Runs the full sweep: per run, per consumer count, one row per enabled
/// strategy (heuristic contributes one row per threshold). The exhaustive
/// scan doubles as every row's accuracy baseline where available.
inline std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
    if (cfg.runs < 1) fail(ErrorCode::InvalidInput, "runs must be at least 1");
    if (cfg.consumer_counts.empty()) fail(ErrorCode::InvalidInput, "consumer_counts must not be empty");
    for (int count : cfg.consumer_counts)
        if (count < 1 || count > 62) fail(ErrorCode::InvalidInput, "consumer counts must lie in [1, 62]");
    for (double t : cfg.thresholds)
        if (t < 0.0 || t > 1.0) fail(ErrorCode::InvalidInput, "thresholds must lie in [0, 1]");
    if (cfg.strategies.empty()) fail(ErrorCode::InvalidInput, "no strategies enabled");

    const bool want_brute = std::find(cfg.strategies.begin(), cfg.strategies.end(), Strategy::BruteForce) !=
                            cfg.strategies.end();
    const bool want_greedy = std::find(cfg.strategies.begin(), cfg.strategies.end(), Strategy::Greedy) !=
                             cfg.strategies.end();
    const bool want_heuristic = std::find(cfg.strategies.begin(), cfg.strategies.end(), Strategy::Heuristic) !=
                                cfg.strategies.end();
    const int max_count = *std::max_element(cfg.consumer_counts.begin(), cfg.consumer_counts.end());

    std::vector<ReportRow> rows;
    for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t run_seed = cfg.base_seed + static_cast<std::uint64_t>(run);
        GeneratorConfig gen = cfg.generator;
        gen.seed = detail::mix_seed(run_seed, 1);
        SemanticTable table = random_semantic_table(gen);
        gen.seed = detail::mix_seed(run_seed, 2);
        CpNet provider = random_cpnet(table, gen);

        std::vector<Consumer> pool;
        for (int i = 0; i < max_count; ++i) {
            std::mt19937_64 rng(detail::mix_seed(run_seed, 1000 + static_cast<std::uint64_t>(i)));
            char id[16];
            std::snprintf(id, sizeof(id), "c%02d", i);
            pool.push_back(Consumer{id, random_consumer(provider, gen, rng)});
        }

        for (int count : cfg.consumer_counts) {
            std::vector<Consumer> consumers(pool.begin(), pool.begin() + count);
            double brute_score = -1.0;
            bool brute_saturated = false;
            bool have_brute = false;

            if (want_brute && count <= cfg.brute_force_limit) {
                SelectionResult r = brute_force_select(provider, consumers, cfg.capacity,
                                                       static_cast<std::size_t>(cfg.brute_force_limit));
                brute_score = r.score.value;
                brute_saturated = r.score.identical;
                have_brute = true;
                ReportRow row;
                row.run_id = run;
                row.strategy = Strategy::BruteForce;
                row.consumer_count = count;
                row.score = r.score.value;
                row.brute_force_score = r.score.value;
                row.accuracy = 1.0;
                row.elapsed_ms = cfg.measure_time ? r.elapsed_ms : 0.0;
                row.candidates_examined = r.candidates_examined;
                rows.push_back(row);
            }

            auto emit = [&](Strategy strategy, double threshold, const SelectionResult* r,
                            std::uint64_t fallback_candidates) {
                ReportRow row;
                row.run_id = run;
                row.strategy = strategy;
                row.threshold = threshold;
                row.consumer_count = count;
                row.score = r ? r->score.value : 0.0;
                row.candidates_examined = r ? r->candidates_examined : fallback_candidates;
                row.elapsed_ms = (r && cfg.measure_time) ? r->elapsed_ms : 0.0;
                if (have_brute) {
                    row.brute_force_score = brute_score;
                    row.accuracy = detail::accuracy_against(row.score, r && r->score.identical, brute_score,
                                                            brute_saturated);
                }
                rows.push_back(row);
            };

            if (want_greedy) {
                try {
                    SelectionResult r = greedy_select(provider, consumers, cfg.capacity);
                    emit(Strategy::Greedy, 0.0, &r, 0);
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoComposableSubset) throw;
                    emit(Strategy::Greedy, 0.0, nullptr, static_cast<std::uint64_t>(count));
                }
            }
            if (want_heuristic) {
                for (double threshold : cfg.thresholds) {
                    try {
                        SelectionResult r = heuristic_select(provider, consumers, threshold, cfg.capacity,
                                                             static_cast<std::size_t>(std::max(
                                                                 cfg.brute_force_limit, max_count)));
                        emit(Strategy::Heuristic, threshold, &r, 0);
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::NoComposableSubset) throw;
                        emit(Strategy::Heuristic, threshold, nullptr, 0);
                    }
                }
            }
        }
    }
    return rows;
}

inline std::string render_report(const std::vector<ReportRow>& rows, ReportFormat format) {
    if (rows.empty()) fail(ErrorCode::InvalidInput, "report has no rows");
    if (format == ReportFormat::Csv) {
        std::string out = kReportHeader;
        out += '\n';
        for (const ReportRow& row : rows) {
            out += to_csv(row);
            out += '\n';
        }
        return out;
    }
    Json j = Json::array();
    for (const ReportRow& row : rows) {
        Json item;
        item["run_id"] = row.run_id;
        item["strategy"] = to_string(row.strategy);
        item["threshold"] = row.threshold;
        item["consumer_count"] = row.consumer_count;
        item["score"] = row.score;
        item["brute_force_score"] = row.brute_force_score;
        item["accuracy"] = row.accuracy;
        item["elapsed_ms"] = row.elapsed_ms;
        item["candidates_examined"] = row.candidates_examined;
        j.push_back(std::move(item));
    }
    return j.dump(2) + "\n";
}

inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::string& path) {
    write_text_file(path, render_report(rows, format));
}

/// Parses rows back from the JSON report form.
inline std::vector<ReportRow> report_from_json(const Json& j) {
    std::vector<ReportRow> rows;
    try {
        for (const Json& item : j) {
            ReportRow row;
            row.run_id = item.at("run_id").get<int>();
            row.strategy = strategy_from_string(item.at("strategy").get<std::string>());
            row.threshold = item.at("threshold").get<double>();
            row.consumer_count = item.at("consumer_count").get<int>();
            row.score = item.at("score").get<double>();
            row.brute_force_score = item.at("brute_force_score").get<double>();
            row.accuracy = item.at("accuracy").get<double>();
            row.elapsed_ms = item.at("elapsed_ms").get<double>();
            row.candidates_examined = item.at("candidates_examined").get<std::uint64_t>();
            rows.push_back(row);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        detail::rethrow_as_syntax(e);
    }
    return rows;
}

/// Reads an ExperimentConfig from JSON, mirroring the struct's field names.
/// Generator knobs live under a nested "generator" object. Unknown keys are
/// rejected so a typo cannot silently fall back to a default.
inline ExperimentConfig experiment_config_from_json(const Json& j) {
    ExperimentConfig cfg;
    try {
        static const std::set<std::string> known{"runs",       "consumer_counts", "thresholds",
                                                 "strategies", "base_seed",       "brute_force_limit",
                                                 "measure_time", "capacity",      "generator"};
        for (const auto& [key, value] : j.items())
            if (!known.count(key)) fail(ErrorCode::SyntaxError, "unknown config field '" + key + "'");
        if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
        if (j.contains("consumer_counts")) cfg.consumer_counts = j.at("consumer_counts").get<std::vector<int>>();
        if (j.contains("thresholds")) cfg.thresholds = j.at("thresholds").get<std::vector<double>>();
        if (j.contains("strategies")) {
            cfg.strategies.clear();
            for (const Json& s : j.at("strategies")) cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
        }
        if (j.contains("base_seed")) cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("brute_force_limit")) cfg.brute_force_limit = j.at("brute_force_limit").get<int>();
        if (j.contains("measure_time")) cfg.measure_time = j.at("measure_time").get<bool>();
        if (j.contains("capacity")) {
            cfg.capacity.enabled = true;
            for (const auto& [attr, level] : j.at("capacity").items())
                cfg.capacity.max_level[attr] = level.get<int>();
        }
        if (j.contains("generator")) {
            const Json& g = j.at("generator");
            static const std::set<std::string> gknown{
                "attribute_count", "levels_per_attribute", "domain_size",        "graph_shape",
                "complete_orders", "dag_edge_probability", "dag_max_parents",    "min_consumer_levels",
                "clone_rate",      "graph_mutation_rate",  "row_mutation_rate"};
            for (const auto& [key, value] : g.items())
                if (!gknown.count(key)) fail(ErrorCode::SyntaxError, "unknown generator field '" + key + "'");
            if (g.contains("attribute_count")) cfg.generator.attribute_count = g.at("attribute_count").get<int>();
            if (g.contains("levels_per_attribute"))
                cfg.generator.levels_per_attribute = g.at("levels_per_attribute").get<int>();
            if (g.contains("domain_size")) cfg.generator.domain_size = g.at("domain_size").get<long long>();
            if (g.contains("graph_shape")) {
                std::string shape = g.at("graph_shape").get<std::string>();
                if (shape == "chain") cfg.generator.graph_shape = GraphShape::Chain;
                else if (shape == "random_dag") cfg.generator.graph_shape = GraphShape::RandomDag;
                else fail(ErrorCode::SyntaxError, "unknown graph_shape '" + shape + "'");
            }
            if (g.contains("complete_orders")) cfg.generator.complete_orders = g.at("complete_orders").get<bool>();
            if (g.contains("dag_edge_probability"))
                cfg.generator.dag_edge_probability = g.at("dag_edge_probability").get<double>();
            if (g.contains("dag_max_parents")) cfg.generator.dag_max_parents = g.at("dag_max_parents").get<int>();
            if (g.contains("min_consumer_levels"))
                cfg.generator.min_consumer_levels = g.at("min_consumer_levels").get<int>();
            if (g.contains("clone_rate")) cfg.generator.clone_rate = g.at("clone_rate").get<double>();
            if (g.contains("graph_mutation_rate"))
                cfg.generator.graph_mutation_rate = g.at("graph_mutation_rate").get<double>();
            if (g.contains("row_mutation_rate"))
                cfg.generator.row_mutation_rate = g.at("row_mutation_rate").get<double>();
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        detail::rethrow_as_syntax(e);
    }
    return cfg;
}

}  // namespace cpnet
