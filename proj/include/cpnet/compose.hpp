#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"

namespace cpnet {

/// Outcome of a composability check. `reasons` is empty iff `composable`.
struct ComposabilityVerdict {
    enum class ReasonCode { GraphCycle, CPTParentMismatch, AttributeMismatch, SemanticIncongruence };

    struct Reason {
        ReasonCode code;
        std::string detail;
    };

    bool composable = false;
    std::vector<Reason> reasons;
};

inline const char* to_string(ComposabilityVerdict::ReasonCode code) {
    switch (code) {
        case ComposabilityVerdict::ReasonCode::GraphCycle: return "GraphCycle";
        case ComposabilityVerdict::ReasonCode::CPTParentMismatch: return "CPTParentMismatch";
        case ComposabilityVerdict::ReasonCode::AttributeMismatch: return "AttributeMismatch";
        case ComposabilityVerdict::ReasonCode::SemanticIncongruence: return "SemanticIncongruence";
    }
    return "Unknown";
}

/// Union of nodes and edges; never judges acyclicity -- callers decide.
inline DependencyGraph merge_graphs(const DependencyGraph& a, const DependencyGraph& b) {
    std::vector<std::string> nodes = a.nodes();
    for (const std::string& node : b.nodes())
        if (std::find(nodes.begin(), nodes.end(), node) == nodes.end()) nodes.push_back(node);
    std::vector<std::pair<std::string, std::string>> edges = a.edges();
    edges.insert(edges.end(), b.edges().begin(), b.edges().end());
    return DependencyGraph(std::move(nodes), std::move(edges));
}

/// Dependency graphs compose when their union stays acyclic.
inline bool graphs_composable(const DependencyGraph& a, const DependencyGraph& b) {
    return merge_graphs(a, b).is_acyclic();
}

/// CPTs of a shared attribute compose only under identical parent sets.
inline bool cpts_composable(const Cpt& a, const Cpt& b) {
    if (a.attribute != b.attribute) return false;
    std::vector<std::string> pa = a.parents;
    std::vector<std::string> pb = b.parents;
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    return pa == pb;
}

namespace detail {

/// True when the two strict orders rank some shared pair of levels in
/// opposite directions.
inline bool orders_conflict(const std::vector<int>& a, const std::vector<int>& b) {
    auto rank = [](const std::vector<int>& order, int level) -> int {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == level) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            int ri = rank(b, a[i]);
            int rj = rank(b, a[j]);
            if (ri >= 0 && rj >= 0 && ri > rj) return true;  // a says a[i] over a[j], b reverses
        }
    }
    return false;
}

/// Interleaves two conflict-free strict orders into one total order over the
/// union of their levels. Kahn's algorithm over all pairwise constraints;
/// ties prefer the level ranked earliest in `a`, then earliest in `b`, then
/// the smallest index -- so the first argument wins where both are silent.
inline std::vector<int> merge_orders(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> levels = a;
    for (int level : b)
        if (std::find(levels.begin(), levels.end(), level) == levels.end()) levels.push_back(level);

    auto rank = [](const std::vector<int>& order, int level) -> int {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == level) return static_cast<int>(i);
        return static_cast<int>(order.size()) + 1000;  // unranked levels sort after ranked ones
    };

    std::set<std::pair<int, int>> before;  // (x, y): x must precede y
    auto add_chain = [&](const std::vector<int>& order) {
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = i + 1; j < order.size(); ++j) before.insert({order[i], order[j]});
    };
    add_chain(a);
    add_chain(b);

    std::vector<int> merged;
    std::vector<int> remaining = levels;
    while (!remaining.empty()) {
        int pick = 0;
        bool found = false;
        for (int candidate : remaining) {
            bool blocked = false;
            for (int other : remaining)
                if (other != candidate && before.count({other, candidate})) blocked = true;
            if (!blocked) {
                if (!found) {
                    pick = candidate;
                    found = true;
                } else {
                    auto key = [&](int level) { return std::make_tuple(rank(a, level), rank(b, level), level); };
                    if (key(candidate) < key(pick)) pick = candidate;
                }
            }
        }
        if (!found)
            fail(ErrorCode::NotComposable, "preference orders conflict; no consistent interleaving exists");
        merged.push_back(pick);
        remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    }
    return merged;
}

/// Would the merged CPTs leave a reachable condition uncovered? Only possible
/// for attributes with two or more parents whose inputs mention different
/// level sets. Returns the first hole found, rendered, or an empty string.
inline std::string merged_coverage_hole(const CpNet& a, const CpNet& b) {
    std::map<std::string, std::vector<int>> ment_a = mentioned_levels(a);
    std::map<std::string, std::vector<int>> ment_b = mentioned_levels(b);
    std::map<std::string, std::vector<int>> merged_ment;
    for (const auto& [name, levels] : ment_a) {
        std::set<int> uni(levels.begin(), levels.end());
        if (auto it = ment_b.find(name); it != ment_b.end()) uni.insert(it->second.begin(), it->second.end());
        merged_ment[name] = std::vector<int>(uni.begin(), uni.end());
    }
    for (const auto& [name, levels] : ment_b)
        if (!merged_ment.count(name)) merged_ment[name] = levels;

    std::string hole;
    for (const auto& [name, cpt_a] : a.cpts) {
        auto it_b = b.cpts.find(name);
        if (it_b == b.cpts.end()) continue;
        const Cpt& cpt_b = it_b->second;
        detail::for_each_assignment(cpt_a.parents, merged_ment, [&](const std::map<std::string, int>& condition) {
            if (hole.empty() && !cpt_a.find_row(condition) && !cpt_b.find_row(condition))
                hole = "attribute '" + name + "' would leave merged condition " +
                       detail::render_condition(condition) + " uncovered";
        });
        if (!hole.empty()) break;
    }
    return hole;
}

}  // namespace detail

/// Full composability check over two nets sharing an attribute universe:
/// the merged dependency graph must stay acyclic, shared attributes must
/// agree on parent sets, and no pair of levels may be ranked in opposite
/// directions under any shared condition. A pair whose merged CPTs would
/// leave a reachable condition without any row is likewise rejected, so a
/// successful composition always yields a valid net.
inline ComposabilityVerdict composable(const CpNet& a, const CpNet& b) {
    using Code = ComposabilityVerdict::ReasonCode;
    std::vector<std::string> names_a, names_b;
    for (const AttributeSpec& spec : a.table.attributes()) names_a.push_back(spec.name);
    for (const AttributeSpec& spec : b.table.attributes()) names_b.push_back(spec.name);
    if (names_a != names_b)
        fail(ErrorCode::TableMismatch, "nets are defined over different attribute universes");
    if (!prefix_compatible(a.table, b.table))
        fail(ErrorCode::TableMismatch, "semantic tables disagree on shared levels");

    ComposabilityVerdict verdict;
    auto add = [&](Code code, std::string detail) {
        verdict.reasons.push_back(ComposabilityVerdict::Reason{code, std::move(detail)});
    };

    std::set<std::string> nodes_a(a.graph.nodes().begin(), a.graph.nodes().end());
    std::set<std::string> nodes_b(b.graph.nodes().begin(), b.graph.nodes().end());
    if (nodes_a != nodes_b) add(Code::AttributeMismatch, "nets cover different attribute sets");

    if (!graphs_composable(a.graph, b.graph))
        add(Code::GraphCycle, "merged dependency graph contains a cycle");

    for (const auto& [name, cpt_a] : a.cpts) {
        auto it_b = b.cpts.find(name);
        if (it_b == b.cpts.end()) continue;
        if (!cpts_composable(cpt_a, it_b->second)) {
            add(Code::CPTParentMismatch, "CPTs of '" + name + "' declare different parent sets");
            continue;
        }
        for (const PreferenceStatement& row_a : cpt_a.rows) {
            const PreferenceStatement* row_b = it_b->second.find_row(row_a.condition);
            if (row_b && detail::orders_conflict(row_a.order, row_b->order))
                add(Code::SemanticIncongruence,
                    "orders of '" + name + "' reverse a shared pair under condition " +
                        detail::render_condition(row_a.condition));
        }
    }

    if (verdict.reasons.empty()) {
        std::string hole = detail::merged_coverage_hole(a, b);
        if (!hole.empty()) add(Code::SemanticIncongruence, hole);
    }
    verdict.composable = verdict.reasons.empty();
    return verdict;
}

/// Composes two composable nets. Shared conditions merge their orders into a
/// single interleaving; conditions present on one side only carry over. Every
/// composed row is annotated with the aggregated demand: the sum of the input
/// rows' effective demands (top-ranked level when no annotation is present).
/// A sum beyond the attribute's scale is recorded as-is -- capacity checks are
/// the caller's policy, not the composition's.
inline CpNet compose(const CpNet& a, const CpNet& b) {
    ComposabilityVerdict verdict = composable(a, b);
    if (!verdict.composable)
        fail(ErrorCode::NotComposable, verdict.reasons.front().detail);

    CpNet out;
    out.table = finer_table(a.table, b.table);
    out.graph = merge_graphs(a.graph, b.graph);
    for (const auto& [name, cpt_a] : a.cpts) {
        Cpt merged;
        merged.attribute = name;
        merged.parents = cpt_a.parents;
        auto it_b = b.cpts.find(name);
        const Cpt* cpt_b = it_b != b.cpts.end() ? &it_b->second : nullptr;
        for (const PreferenceStatement& row_a : cpt_a.rows) {
            const PreferenceStatement* row_b = cpt_b ? cpt_b->find_row(row_a.condition) : nullptr;
            PreferenceStatement row;
            row.condition = row_a.condition;
            if (row_b) {
                row.order = detail::merge_orders(row_a.order, row_b->order);
                row.demand = row_a.effective_demand() + row_b->effective_demand();
            } else {
                row.order = row_a.order;
                row.demand = row_a.effective_demand();
            }
            merged.rows.push_back(std::move(row));
        }
        if (cpt_b) {
            for (const PreferenceStatement& row_b : cpt_b->rows) {
                if (cpt_a.find_row(row_b.condition)) continue;
                PreferenceStatement row = row_b;
                row.demand = row_b.effective_demand();
                merged.rows.push_back(std::move(row));
            }
        }
        out.cpts[name] = std::move(merged);
    }
    for (const auto& [name, cpt_b] : b.cpts)
        if (!out.cpts.count(name)) out.cpts[name] = cpt_b;
    normalize(out);
    return out;
}

/// Left-fold of compose over `inputs` in the given order. A singleton folds
/// to an exact copy. On failure the error names the offending input pair.
inline CpNet compose_all(const std::vector<CpNet>& inputs) {
    if (inputs.empty()) fail(ErrorCode::InvalidInput, "compose_all needs at least one net");
    CpNet acc = inputs.front();
    for (std::size_t j = 1; j < inputs.size(); ++j) {
        ComposabilityVerdict verdict = composable(acc, inputs[j]);
        if (verdict.composable) {
            acc = compose(acc, inputs[j]);
            continue;
        }
        // Name a concrete input pair: the first earlier input that refuses to
        // pair with inputs[j], or the accumulated prefix when only the fold
        // order is to blame.
        for (std::size_t i = 0; i < j; ++i) {
            ComposabilityVerdict pairwise = composable(inputs[i], inputs[j]);
            if (!pairwise.composable)
                fail(ErrorCode::NotComposable, "inputs " + std::to_string(i) + " and " + std::to_string(j) +
                                                   " are not composable: " + pairwise.reasons.front().detail);
        }
        fail(ErrorCode::NotComposable, "input " + std::to_string(j) +
                                           " conflicts with the composition of inputs 0.." +
                                           std::to_string(j - 1) + ": " + verdict.reasons.front().detail);
    }
    return acc;
}

}  // namespace cpnet
