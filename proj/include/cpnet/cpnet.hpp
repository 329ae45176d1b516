#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpnet/error.hpp"
#include "cpnet/semantic_table.hpp"

namespace cpnet {

/// Directed dependency graph over attribute names.
///
/// Construction rejects unknown edge endpoints, duplicate nodes and
/// self-loops. Cycles are representable on purpose: graph merges hand the
/// result to the caller for the acyclicity decision.
class DependencyGraph {
  public:
    DependencyGraph() = default;

    DependencyGraph(std::vector<std::string> nodes, std::vector<std::pair<std::string, std::string>> edges)
        : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (nodes_[i] == nodes_[j]) fail(ErrorCode::InvalidInput, "duplicate node '" + nodes_[i] + "'");
        for (const auto& [from, to] : edges_) {
            if (!has_node(from)) fail(ErrorCode::UnknownAttribute, "edge source '" + from + "' is not a node");
            if (!has_node(to)) fail(ErrorCode::UnknownAttribute, "edge target '" + to + "' is not a node");
            if (from == to) fail(ErrorCode::InvalidInput, "self-loop on '" + from + "'");
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    }

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }

    bool has_node(const std::string& name) const noexcept {
        return std::find(nodes_.begin(), nodes_.end(), name) != nodes_.end();
    }

    bool has_edge(const std::string& from, const std::string& to) const noexcept {
        return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(from, to));
    }

    /// Parents of `name`, in node declaration order.
    std::vector<std::string> parents_of(const std::string& name) const {
        std::vector<std::string> out;
        for (const std::string& candidate : nodes_)
            if (has_edge(candidate, name)) out.push_back(candidate);
        return out;
    }

    /// Kahn's algorithm with declaration-order tie-breaks; nullopt on a cycle.
    std::optional<std::vector<std::string>> topological_order() const {
        std::map<std::string, int> indegree;
        for (const std::string& n : nodes_) indegree[n] = 0;
        for (const auto& e : edges_) ++indegree[e.second];
        std::vector<std::string> order;
        std::vector<bool> emitted(nodes_.size(), false);
        while (order.size() < nodes_.size()) {
            bool advanced = false;
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                if (emitted[i] || indegree[nodes_[i]] != 0) continue;
                emitted[i] = true;
                order.push_back(nodes_[i]);
                for (const auto& e : edges_)
                    if (e.first == nodes_[i]) --indegree[e.second];
                advanced = true;
                break;
            }
            if (!advanced) return std::nullopt;
        }
        return order;
    }

    bool is_acyclic() const { return topological_order().has_value(); }

    friend bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

  private:
    std::vector<std::string> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
};

/// One CPT row: under `condition` (an assignment to the attribute's parents),
/// the mentioned levels in strictly decreasing preference. Levels omitted from
/// `order` are excluded from consideration, not ranked last. `demand` is an
/// aggregated-demand annotation attached by composition; when absent the
/// effective demand is the top-ranked level.
struct PreferenceStatement {
    std::map<std::string, int> condition;
    std::vector<int> order;
    std::optional<int> demand;

    int effective_demand() const { return demand ? *demand : (order.empty() ? 0 : order.front()); }

    friend bool operator==(const PreferenceStatement& a, const PreferenceStatement& b) {
        return a.condition == b.condition && a.order == b.order && a.demand == b.demand;
    }
};

/// Conditional preference table of a single attribute.
struct Cpt {
    std::string attribute;
    std::vector<std::string> parents;  // sorted by name
    std::vector<PreferenceStatement> rows;

    const PreferenceStatement* find_row(const std::map<std::string, int>& condition) const {
        for (const PreferenceStatement& row : rows)
            if (row.condition == condition) return &row;
        return nullptr;
    }

    friend bool operator==(const Cpt& a, const Cpt& b) {
        return a.attribute == b.attribute && a.parents == b.parents && a.rows == b.rows;
    }
};

/// A conditional preference network: dependency graph plus one CPT per node,
/// interpreted against a governing semantic table.
struct CpNet {
    SemanticTable table;
    DependencyGraph graph;
    std::map<std::string, Cpt> cpts;

    friend bool operator==(const CpNet& a, const CpNet& b) {
        return a.table == b.table && a.graph == b.graph && a.cpts == b.cpts;
    }
};

/// Canonical form: parents sorted by name, rows sorted by condition.
inline void normalize(Cpt& cpt) {
    std::sort(cpt.parents.begin(), cpt.parents.end());
    std::sort(cpt.rows.begin(), cpt.rows.end(),
              [](const PreferenceStatement& a, const PreferenceStatement& b) { return a.condition < b.condition; });
}

inline void normalize(CpNet& cp) {
    for (auto& [name, cpt] : cp.cpts) {
        cpt.attribute = name;
        normalize(cpt);
    }
}

/// Per attribute, the sorted union of levels mentioned by any of its rows.
/// Levels an attribute never mentions contribute no outcomes downstream.
inline std::map<std::string, std::vector<int>> mentioned_levels(const CpNet& cp) {
    std::map<std::string, std::vector<int>> out;
    for (const auto& [name, cpt] : cp.cpts) {
        std::set<int> seen;
        for (const PreferenceStatement& row : cpt.rows) seen.insert(row.order.begin(), row.order.end());
        out[name] = std::vector<int>(seen.begin(), seen.end());
    }
    return out;
}

struct Violation {
    enum class Code {
        EmptyNet,
        UnknownAttribute,
        MissingAttribute,
        MissingCpt,
        ExtraCpt,
        ParentMismatch,
        ConditionMismatch,
        UnknownLevel,
        DuplicateLevel,
        EmptyOrder,
        DuplicateConditionRow,
        MissingConditionRow,
        CycleViolation,
    };

    Code code;
    std::string attribute;
    std::string message;
};

inline const char* to_string(Violation::Code code) {
    switch (code) {
        case Violation::Code::EmptyNet: return "EmptyNet";
        case Violation::Code::UnknownAttribute: return "UnknownAttribute";
        case Violation::Code::MissingAttribute: return "MissingAttribute";
        case Violation::Code::MissingCpt: return "MissingCpt";
        case Violation::Code::ExtraCpt: return "ExtraCpt";
        case Violation::Code::ParentMismatch: return "ParentMismatch";
        case Violation::Code::ConditionMismatch: return "ConditionMismatch";
        case Violation::Code::UnknownLevel: return "UnknownLevel";
        case Violation::Code::DuplicateLevel: return "DuplicateLevel";
        case Violation::Code::EmptyOrder: return "EmptyOrder";
        case Violation::Code::DuplicateConditionRow: return "DuplicateConditionRow";
        case Violation::Code::MissingConditionRow: return "MissingConditionRow";
        case Violation::Code::CycleViolation: return "CycleViolation";
    }
    return "Unknown";
}

namespace detail {

inline std::string render_condition(const std::map<std::string, int>& condition) {
    if (condition.empty()) return "{}";
    std::string out = "{";
    bool first = true;
    for (const auto& [attr, level] : condition) {
        if (!first) out += ",";
        out += attr + "=" + std::to_string(level);
        first = false;
    }
    return out + "}";
}

/// Enumerates every assignment over `parents` drawing from `choices[parent]`,
/// in lexicographic order of the (sorted) parent names.
inline void for_each_assignment(const std::vector<std::string>& parents,
                                const std::map<std::string, std::vector<int>>& choices,
                                const std::function<void(const std::map<std::string, int>&)>& body) {
    std::map<std::string, int> current;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == parents.size()) {
            body(current);
            return;
        }
        auto it = choices.find(parents[pos]);
        if (it == choices.end() || it->second.empty()) return;  // nothing reachable under this parent
        for (int level : it->second) {
            current[parents[pos]] = level;
            rec(pos + 1);
        }
        current.erase(parents[pos]);
    };
    rec(0);
}

}  // namespace detail

/// Structural and semantic validation. Returns every violation found; an
/// empty result marks the net as valid. CPT completeness is judged against
/// the reachable condition space: each attribute must carry one row per
/// combination of its parents' *mentioned* levels (computed topologically),
/// so levels a parent excludes require no rows downstream.
inline std::vector<Violation> validate(const CpNet& cp) {
    std::vector<Violation> out;
    auto add = [&](Violation::Code code, const std::string& attr, std::string msg) {
        out.push_back(Violation{code, attr, std::move(msg)});
    };

    if (cp.graph.nodes().empty()) {
        add(Violation::Code::EmptyNet, "", "net has no attributes");
        return out;
    }

    for (const std::string& node : cp.graph.nodes())
        if (!cp.table.has_attribute(node))
            add(Violation::Code::UnknownAttribute, node, "graph node '" + node + "' is not in the semantic table");
    for (const AttributeSpec& spec : cp.table.attributes())
        if (!cp.graph.has_node(spec.name))
            add(Violation::Code::MissingAttribute, spec.name,
                "table attribute '" + spec.name + "' is missing from the graph");

    for (const std::string& node : cp.graph.nodes())
        if (!cp.cpts.count(node)) add(Violation::Code::MissingCpt, node, "no CPT for attribute '" + node + "'");
    for (const auto& [name, cpt] : cp.cpts)
        if (!cp.graph.has_node(name))
            add(Violation::Code::ExtraCpt, name, "CPT for '" + name + "' has no matching graph node");

    // Per-CPT structural checks, independent of reachability.
    for (const auto& [name, cpt] : cp.cpts) {
        if (!cp.graph.has_node(name) || !cp.table.has_attribute(name)) continue;
        std::vector<std::string> expected = cp.graph.parents_of(name);
        std::sort(expected.begin(), expected.end());
        std::vector<std::string> declared = cpt.parents;
        std::sort(declared.begin(), declared.end());
        if (declared != expected) {
            add(Violation::Code::ParentMismatch, name,
                "CPT of '" + name + "' declares different parents than the graph");
            continue;
        }
        int levels = cp.table.level_count(name);
        std::set<std::map<std::string, int>> seen_conditions;
        for (const PreferenceStatement& row : cpt.rows) {
            bool condition_ok = row.condition.size() == expected.size();
            for (const auto& [parent, level] : row.condition) {
                if (!std::binary_search(expected.begin(), expected.end(), parent)) condition_ok = false;
                else if (cp.table.has_attribute(parent) &&
                         (level < 1 || level > cp.table.level_count(parent)))
                    add(Violation::Code::UnknownLevel, name,
                        "condition level " + std::to_string(level) + " out of range for parent '" + parent + "'");
            }
            if (!condition_ok)
                add(Violation::Code::ConditionMismatch, name,
                    "row condition " + detail::render_condition(row.condition) +
                        " does not assign exactly the parents of '" + name + "'");
            if (!seen_conditions.insert(row.condition).second)
                add(Violation::Code::DuplicateConditionRow, name,
                    "duplicate row for condition " + detail::render_condition(row.condition));
            if (row.order.empty())
                add(Violation::Code::EmptyOrder, name,
                    "row " + detail::render_condition(row.condition) + " ranks no levels");
            std::set<int> seen_levels;
            for (int level : row.order) {
                if (level < 1 || level > levels)
                    add(Violation::Code::UnknownLevel, name,
                        "order level " + std::to_string(level) + " out of range for '" + name + "'");
                else if (!seen_levels.insert(level).second)
                    add(Violation::Code::DuplicateLevel, name,
                        "level " + std::to_string(level) + " ranked twice in row " +
                            detail::render_condition(row.condition));
            }
        }
    }

    std::optional<std::vector<std::string>> topo = cp.graph.topological_order();
    if (!topo) {
        add(Violation::Code::CycleViolation, "", "dependency graph contains a directed cycle");
        return out;  // reachability is undefined on a cyclic graph
    }
    if (!out.empty()) return out;  // completeness needs structurally sound CPTs

    // Completeness over the reachable condition space, walked in topological
    // order so each parent's mentioned set is known before its children.
    std::map<std::string, std::vector<int>> ment = mentioned_levels(cp);
    for (const std::string& name : *topo) {
        const Cpt& cpt = cp.cpts.at(name);
        detail::for_each_assignment(cpt.parents, ment, [&](const std::map<std::string, int>& condition) {
            if (!cpt.find_row(condition))
                add(Violation::Code::MissingConditionRow, name,
                    "no row of '" + name + "' covers reachable condition " +
                        detail::render_condition(condition));
        });
    }
    return out;
}

inline bool is_valid(const CpNet& cp) { return validate(cp).empty(); }

/// Convenience guard for operations whose precondition is a valid net.
inline void require_valid(const CpNet& cp, const std::string& who) {
    std::vector<Violation> violations = validate(cp);
    if (violations.empty()) return;
    std::string msg = who + ": net is invalid (" + std::to_string(violations.size()) + " violations";
    msg += "; first: " + violations.front().message + ")";
    fail(ErrorCode::ValidationError, msg);
}

}  // namespace cpnet
