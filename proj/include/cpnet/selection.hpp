#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpnet/compose.hpp"
#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"
#include "cpnet/induced.hpp"
#include "cpnet/similarity.hpp"

namespace cpnet {

enum class Strategy { BruteForce, Greedy, Heuristic };

inline const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::BruteForce: return "brute";
        case Strategy::Greedy: return "greedy";
        case Strategy::Heuristic: return "heuristic";
    }
    return "unknown";
}

/// Optional per-attribute ceiling on aggregated demand. Attributes without an
/// entry are only checked against their own scale when the constraint is on.
struct CapacityConstraint {
    bool enabled = false;
    std::map<std::string, int> max_level;
};

struct Consumer {
    std::string id;
    CpNet net;
};

struct SelectionResult {
    Strategy strategy = Strategy::BruteForce;
    double threshold = 0.0;                  // heuristic filter; 0 elsewhere
    std::vector<std::string> chosen;         // consumer ids, sorted
    std::optional<CpNet> composed;
    SimilarityScore score;
    double elapsed_ms = 0.0;
    std::uint64_t candidates_examined = 0;
};

/// A provider net with part of its preference mass already covered: rows keep
/// their conditions but satisfied rows carry an empty order. Not a valid
/// CpNet on purpose -- emptied orders would violate validation.
struct ResidualNet {
    SemanticTable table;
    DependencyGraph graph;
    std::map<std::string, Cpt> cpts;

    bool zero() const {
        for (const auto& [name, cpt] : cpts)
            for (const PreferenceStatement& row : cpt.rows)
                if (!row.order.empty()) return false;
        return true;
    }
};

inline ResidualNet to_residual(const CpNet& cp) {
    return ResidualNet{cp.table, cp.graph, cp.cpts};
}

/// Removes from `target` every statement the selected net covers: a target
/// row is satisfied when an unclaimed selected row carries the same rank
/// signature under a condition that fulfills the target's. Claims are
/// one-to-one, so one selected row never satisfies two target rows.
inline ResidualNet difference_cpnet(const ResidualNet& target, const CpNet& selected) {
    if (!detail::graphs_equivalent(target.graph, selected.graph))
        fail(ErrorCode::GraphMismatch, "difference requires matching dependency graphs");
    ResidualNet out = target;
    for (auto& [name, cpt] : out.cpts) {
        auto it = selected.cpts.find(name);
        if (it == selected.cpts.end()) continue;
        const std::vector<PreferenceStatement>& sel = it->second.rows;
        std::vector<bool> claimed(sel.size(), false);
        for (PreferenceStatement& row : cpt.rows) {
            if (row.order.empty()) continue;
            std::vector<int> pattern = statement_pattern(row);
            for (std::size_t i = 0; i < sel.size(); ++i) {
                if (claimed[i] || statement_pattern(sel[i]) != pattern) continue;
                if (!condition_fulfills(sel[i].condition, row.condition)) continue;
                claimed[i] = true;
                row.order.clear();
                break;
            }
        }
    }
    return out;
}

inline ResidualNet difference_cpnet(const CpNet& target, const CpNet& selected) {
    return difference_cpnet(to_residual(target), selected);
}

/// Relative similarity of a residual against a candidate: satisfied rows are
/// out of the game and contribute to neither tally.
inline SimilarityScore residual_similarity(const ResidualNet& residual, const CpNet& candidate) {
    SimilarityScore score;
    score.method = SimilarityMethod::RelativePattern;
    if (!detail::graphs_equivalent(residual.graph, candidate.graph)) return score;
    long long common = 0;
    long long total = 0;
    for (const auto& [name, cpt] : residual.cpts) {
        auto it = candidate.cpts.find(name);
        if (it == candidate.cpts.end()) continue;
        std::vector<detail::PatternRow> left;
        for (const PreferenceStatement& row : cpt.rows)
            if (!row.order.empty()) left.push_back(detail::PatternRow{&row.condition, statement_pattern(row)});
        long long weight = statement_weight(residual.table, name, cpt.parents);
        auto [c, t] = detail::match_rows(weight, left, detail::pattern_rows(it->second));
        common += c;
        total += t;
    }
    score.value = total > 0 ? static_cast<double>(common) / static_cast<double>(total) : 0.0;
    return score;
}

/// Effective demand of every composed row must stay on the attribute's scale
/// and under any per-attribute ceiling.
inline bool respects_capacity(const CpNet& net, const CapacityConstraint& cap) {
    if (!cap.enabled) return true;
    for (const auto& [name, cpt] : net.cpts) {
        int scale = net.table.level_count(name);
        auto ceiling = cap.max_level.find(name);
        for (const PreferenceStatement& row : cpt.rows) {
            int demand = row.effective_demand();
            if (demand > scale) return false;
            if (ceiling != cap.max_level.end() && demand > ceiling->second) return false;
        }
    }
    return true;
}

namespace detail {

inline std::vector<Consumer> sorted_by_id(std::vector<Consumer> consumers) {
    std::sort(consumers.begin(), consumers.end(),
              [](const Consumer& a, const Consumer& b) { return a.id < b.id; });
    return consumers;
}

inline double elapsed_ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

/// Exhaustive scan over every non-empty subset of `consumers` (already id-
/// sorted). Subsets fold in id order; infeasible ones still count as
/// examined. Ties break toward the larger subset, then the lexicographically
/// smallest id list.
inline SelectionResult exhaustive_scan(const InducedGraph& provider_graph, std::vector<Consumer> consumers,
                                       const CapacityConstraint& cap, std::size_t max_outcomes,
                                       double saturation) {
    const std::size_t n = consumers.size();
    SelectionResult result;
    bool found = false;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        ++result.candidates_examined;
        std::vector<CpNet> nets;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                nets.push_back(consumers[i].net);
                ids.push_back(consumers[i].id);
            }
        }
        CpNet composed;
        try {
            composed = compose_all(nets);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotComposable) continue;
            throw;
        }
        if (!respects_capacity(composed, cap)) continue;
        SimilarityScore score = induced_similarity(induced_graph(composed, max_outcomes), provider_graph, saturation);
        bool better = !found;
        if (found) {
            if (score.value > result.score.value)
                better = true;
            else if (score.value == result.score.value) {
                if (ids.size() > result.chosen.size()) better = true;
                else if (ids.size() == result.chosen.size() && ids < result.chosen) better = true;
            }
        }
        if (better) {
            found = true;
            result.chosen = ids;
            result.composed = std::move(composed);
            result.score = score;
        }
    }
    if (!found)
        fail(ErrorCode::NoComposableSubset, "no non-empty subset composes into a capacity-respecting net");
    return result;
}

}  // namespace detail

/// Examines all 2^N - 1 non-empty subsets and returns the one whose
/// composition is most similar to the provider (induced-graph measure).
/// Preconditions: all nets valid over one attribute universe, N >= 1 and at
/// most `limit` (the scan is exponential by design).
inline SelectionResult brute_force_select(const CpNet& provider, const std::vector<Consumer>& consumers,
                                          const CapacityConstraint& cap = {}, std::size_t limit = 20,
                                          std::size_t max_outcomes = kDefaultMaxOutcomes,
                                          double saturation = kIdenticalSaturation) {
    if (consumers.empty()) fail(ErrorCode::InvalidInput, "no consumers to select from");
    if (consumers.size() > limit)
        fail(ErrorCode::InvalidInput, "brute force refuses " + std::to_string(consumers.size()) +
                                          " consumers (limit " + std::to_string(limit) + ")");
    auto start = std::chrono::steady_clock::now();
    InducedGraph provider_graph = induced_graph(provider, max_outcomes);
    SelectionResult result = detail::exhaustive_scan(provider_graph, detail::sorted_by_id(consumers), cap,
                                                     max_outcomes, saturation);
    result.strategy = Strategy::BruteForce;
    result.elapsed_ms = detail::elapsed_ms_since(start);
    return result;
}

/// Greedy cover: start from the consumer most similar to the provider, then
/// repeatedly add the unpicked consumer that best covers the still-unsatisfied
/// residual and composes with the running result. Stops when the residual is
/// fully covered, nobody scores above zero, or consumers run out.
inline SelectionResult greedy_select(const CpNet& provider, const std::vector<Consumer>& consumers,
                                     const CapacityConstraint& cap = {},
                                     std::size_t max_outcomes = kDefaultMaxOutcomes,
                                     double saturation = kIdenticalSaturation) {
    if (consumers.empty()) fail(ErrorCode::InvalidInput, "no consumers to select from");
    auto start = std::chrono::steady_clock::now();
    std::vector<Consumer> pool = detail::sorted_by_id(consumers);
    SelectionResult result;
    result.strategy = Strategy::Greedy;

    std::vector<bool> picked(pool.size(), false);
    std::optional<std::size_t> first;
    double first_score = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        ++result.candidates_examined;
        if (!respects_capacity(pool[i].net, cap)) continue;
        double s = relative_similarity(provider, pool[i].net).value;
        if (s > 0.0 && (!first || s > first_score)) {
            first = i;
            first_score = s;
        }
    }
    if (!first)
        fail(ErrorCode::NoComposableSubset, "no consumer has positive relative similarity to the provider");

    picked[*first] = true;
    CpNet running = pool[*first].net;
    result.chosen.push_back(pool[*first].id);
    ResidualNet residual = difference_cpnet(provider, pool[*first].net);

    while (!residual.zero()) {
        std::optional<std::size_t> best;
        double best_score = 0.0;
        CpNet best_composed;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (picked[i]) continue;
            ++result.candidates_examined;
            CpNet trial;
            try {
                if (!composable(running, pool[i].net).composable) continue;
                trial = compose(running, pool[i].net);
            } catch (const Error&) {
                continue;  // incompatible universes can never join the cover
            }
            if (!respects_capacity(trial, cap)) continue;
            double s = residual_similarity(residual, pool[i].net).value;
            if (s > 0.0 && (!best || s > best_score)) {
                best = i;
                best_score = s;
                best_composed = std::move(trial);
            }
        }
        if (!best) break;
        picked[*best] = true;
        running = std::move(best_composed);
        result.chosen.push_back(pool[*best].id);
        residual = difference_cpnet(residual, pool[*best].net);
    }

    std::sort(result.chosen.begin(), result.chosen.end());
    result.composed = running;
    result.score = induced_similarity(induced_graph(running, max_outcomes),
                                      induced_graph(provider, max_outcomes), saturation);
    result.elapsed_ms = detail::elapsed_ms_since(start);
    return result;
}

/// Relative-similarity prefilter in front of the exhaustive scan: only
/// consumers scoring at least `threshold` against the provider survive into
/// the subset enumeration. A threshold of 0 keeps everyone and reproduces
/// brute force exactly; 1 keeps only perfect pattern matches.
inline SelectionResult heuristic_select(const CpNet& provider, const std::vector<Consumer>& consumers,
                                        double threshold, const CapacityConstraint& cap = {},
                                        std::size_t limit = 20,
                                        std::size_t max_outcomes = kDefaultMaxOutcomes,
                                        double saturation = kIdenticalSaturation) {
    if (consumers.empty()) fail(ErrorCode::InvalidInput, "no consumers to select from");
    if (threshold < 0.0 || threshold > 1.0)
        fail(ErrorCode::InvalidInput, "threshold must lie in [0, 1]");
    auto start = std::chrono::steady_clock::now();
    std::vector<Consumer> pool;
    for (const Consumer& c : detail::sorted_by_id(consumers))
        if (relative_similarity(provider, c.net).value >= threshold) pool.push_back(c);
    if (pool.empty())
        fail(ErrorCode::NoComposableSubset, "no consumer reaches relative similarity " + std::to_string(threshold));
    if (pool.size() > limit)
        fail(ErrorCode::InvalidInput, "heuristic scan refuses " + std::to_string(pool.size()) +
                                          " surviving consumers (limit " + std::to_string(limit) + ")");
    InducedGraph provider_graph = induced_graph(provider, max_outcomes);
    SelectionResult result = detail::exhaustive_scan(provider_graph, std::move(pool), cap, max_outcomes, saturation);
    result.strategy = Strategy::Heuristic;
    result.threshold = threshold;
    result.elapsed_ms = detail::elapsed_ms_since(start);
    return result;
}

}  // namespace cpnet
