#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"

namespace cpnet {

inline constexpr std::size_t kDefaultMaxOutcomes = 1'000'000;

// Outcome keys pack one level index per attribute into a 64-bit word.
inline constexpr int kOutcomeBitsPerAttribute = 6;
inline constexpr std::size_t kMaxPackedAttributes = 10;
inline constexpr int kMaxPackedLevel = (1 << kOutcomeBitsPerAttribute) - 1;

/// A complete assignment: one level index per table attribute, in table
/// declaration order.
struct Outcome {
    std::vector<int> levels;

    friend bool operator==(const Outcome& a, const Outcome& b) { return a.levels == b.levels; }
    friend bool operator<(const Outcome& a, const Outcome& b) { return a.levels < b.levels; }
};

inline std::uint64_t encode_outcome(const Outcome& outcome) {
    if (outcome.levels.size() > kMaxPackedAttributes)
        fail(ErrorCode::TooLarge, "induced-graph operations support at most " +
                                      std::to_string(kMaxPackedAttributes) + " attributes");
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < outcome.levels.size(); ++i) {
        int level = outcome.levels[i];
        if (level < 0 || level > kMaxPackedLevel)
            fail(ErrorCode::TooLarge, "level index " + std::to_string(level) + " exceeds the packed range");
        key |= static_cast<std::uint64_t>(level) << (kOutcomeBitsPerAttribute * i);
    }
    return key;
}

inline Outcome decode_outcome(std::uint64_t key, std::size_t attribute_count) {
    Outcome out;
    out.levels.resize(attribute_count);
    for (std::size_t i = 0; i < attribute_count; ++i)
        out.levels[i] = static_cast<int>((key >> (kOutcomeBitsPerAttribute * i)) & kMaxPackedLevel);
    return out;
}

inline std::string render_outcome(const SemanticTable& table, const Outcome& outcome) {
    std::string out;
    for (std::size_t i = 0; i < outcome.levels.size(); ++i) {
        if (i) out += ",";
        out += table.attribute_at(i).name + "=" + std::to_string(outcome.levels[i]);
    }
    return out;
}

/// Parses "attr=level,attr=level,..." back into an Outcome (table order).
inline Outcome parse_outcome(const SemanticTable& table, const std::string& text) {
    Outcome out;
    out.levels.assign(table.attribute_count(), 0);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorCode::SyntaxError, "expected attr=level, got '" + item + "'");
        std::string name = item.substr(0, eq);
        int index = table.index_of(name);
        if (index < 0) fail(ErrorCode::UnknownAttribute, "no attribute '" + name + "'");
        try {
            out.levels[static_cast<std::size_t>(index)] = std::stoi(item.substr(eq + 1));
        } catch (const std::exception&) {
            fail(ErrorCode::SyntaxError, "bad level index in '" + item + "'");
        }
        pos = comma + 1;
    }
    for (std::size_t i = 0; i < out.levels.size(); ++i)
        if (out.levels[i] == 0)
            fail(ErrorCode::InvalidInput, "outcome does not assign '" + table.attribute_at(i).name + "'");
    return out;
}

/// The preference graph a CP-Net induces over its outcome space. Edges point
/// from the worse outcome to the better one; each edge is a single-attribute
/// flip sanctioned by a CPT row, everything else equal.
struct InducedGraph {
    std::size_t attribute_count = 0;
    std::vector<Outcome> nodes;                                     // enumeration order
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;     // (worse, better), sorted
    std::vector<std::uint64_t> node_keys;                           // sorted

    bool has_node(std::uint64_t key) const {
        return std::binary_search(node_keys.begin(), node_keys.end(), key);
    }
};

namespace detail {

struct OutcomeSpace {
    std::vector<std::string> attrs;             // table order
    std::vector<std::vector<int>> mentioned;    // per attrs[i], sorted
    std::size_t count = 1;
};

inline OutcomeSpace outcome_space(const CpNet& cp, std::size_t max_outcomes) {
    if (cp.graph.nodes().empty() || cp.table.attribute_count() == 0)
        fail(ErrorCode::InvalidInput, "cannot enumerate outcomes of an empty net");
    OutcomeSpace space;
    std::map<std::string, std::vector<int>> ment = mentioned_levels(cp);
    for (const AttributeSpec& spec : cp.table.attributes()) {
        auto it = ment.find(spec.name);
        if (it == ment.end() || it->second.empty())
            fail(ErrorCode::InvalidInput, "attribute '" + spec.name + "' mentions no levels");
        space.attrs.push_back(spec.name);
        space.mentioned.push_back(it->second);
        space.count *= it->second.size();
        if (space.count > max_outcomes)
            fail(ErrorCode::TooLarge, "outcome space exceeds the cap of " + std::to_string(max_outcomes));
    }
    return space;
}

}  // namespace detail

/// All outcomes over the mentioned-level sets, ordered lexicographically with
/// attributes ranked by topological order (levels ascending by index).
/// Precondition: `cp` is valid.
inline std::vector<Outcome> enumerate_outcomes(const CpNet& cp, std::size_t max_outcomes = kDefaultMaxOutcomes) {
    detail::OutcomeSpace space = detail::outcome_space(cp, max_outcomes);
    std::optional<std::vector<std::string>> topo = cp.graph.topological_order();
    if (!topo) fail(ErrorCode::InvalidInput, "cannot enumerate outcomes of a cyclic net");

    std::vector<std::size_t> attr_pos;  // topo rank -> table position
    for (const std::string& name : *topo) attr_pos.push_back(static_cast<std::size_t>(cp.table.index_of(name)));

    std::vector<Outcome> out;
    out.reserve(space.count);
    Outcome current;
    current.levels.assign(space.attrs.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t rank) {
        if (rank == attr_pos.size()) {
            out.push_back(current);
            return;
        }
        std::size_t pos = attr_pos[rank];
        for (int level : space.mentioned[pos]) {
            current.levels[pos] = level;
            rec(rank + 1);
        }
    };
    rec(0);
    return out;
}

/// Builds the full induced preference graph. Precondition: `cp` is valid.
/// Throws TooLarge beyond `max_outcomes` nodes.
inline InducedGraph induced_graph(const CpNet& cp, std::size_t max_outcomes = kDefaultMaxOutcomes) {
    detail::OutcomeSpace space = detail::outcome_space(cp, max_outcomes);
    InducedGraph graph;
    graph.attribute_count = space.attrs.size();
    graph.nodes = enumerate_outcomes(cp, max_outcomes);
    graph.node_keys.reserve(graph.nodes.size());
    for (const Outcome& node : graph.nodes) graph.node_keys.push_back(encode_outcome(node));
    std::sort(graph.node_keys.begin(), graph.node_keys.end());

    // Row-driven edge generation: for each attribute, sweep every context
    // (assignment over the other attributes), look up the row the context's
    // parent slice selects, and emit one edge per ordered pair in the row.
    for (std::size_t target = 0; target < space.attrs.size(); ++target) {
        const Cpt& cpt = cp.cpts.at(space.attrs[target]);
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < space.attrs.size(); ++i)
            if (i != target) others.push_back(i);

        std::vector<std::size_t> odometer(others.size(), 0);
        Outcome context;
        context.levels.assign(space.attrs.size(), 0);
        bool done = false;
        while (!done) {
            for (std::size_t k = 0; k < others.size(); ++k)
                context.levels[others[k]] = space.mentioned[others[k]][odometer[k]];

            std::map<std::string, int> condition;
            for (const std::string& parent : cpt.parents)
                condition[parent] = context.levels[static_cast<std::size_t>(cp.table.index_of(parent))];
            if (const PreferenceStatement* row = cpt.find_row(condition)) {
                for (std::size_t better = 0; better < row->order.size(); ++better) {
                    for (std::size_t worse = better + 1; worse < row->order.size(); ++worse) {
                        Outcome better_outcome = context;
                        Outcome worse_outcome = context;
                        better_outcome.levels[target] = row->order[better];
                        worse_outcome.levels[target] = row->order[worse];
                        graph.edges.emplace_back(encode_outcome(worse_outcome), encode_outcome(better_outcome));
                    }
                }
            }

            // advance the odometer (last attribute fastest)
            done = true;
            for (std::size_t k = others.size(); k-- > 0;) {
                if (++odometer[k] < space.mentioned[others[k]].size()) {
                    done = false;
                    break;
                }
                odometer[k] = 0;
            }
            if (others.empty()) done = true;
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
    return graph;
}

/// True when `a` is strictly preferred to `b`: the induced graph holds a
/// directed path from b up to a. Irreflexive by construction.
inline bool dominates(const InducedGraph& graph, const Outcome& a, const Outcome& b) {
    std::uint64_t target = encode_outcome(a);
    std::uint64_t start = encode_outcome(b);
    if (!graph.has_node(target) || !graph.has_node(start))
        fail(ErrorCode::InvalidInput, "outcome is not a node of the induced graph");
    if (target == start) return false;

    std::deque<std::uint64_t> frontier{start};
    std::vector<std::uint64_t> visited{start};
    auto seen = [&](std::uint64_t key) {
        return std::binary_search(visited.begin(), visited.end(), key);
    };
    while (!frontier.empty()) {
        std::uint64_t at = frontier.front();
        frontier.pop_front();
        auto lo = std::lower_bound(graph.edges.begin(), graph.edges.end(),
                                   std::make_pair(at, std::uint64_t{0}));
        for (auto it = lo; it != graph.edges.end() && it->first == at; ++it) {
            if (it->second == target) return true;
            if (!seen(it->second)) {
                visited.insert(std::lower_bound(visited.begin(), visited.end(), it->second), it->second);
                frontier.push_back(it->second);
            }
        }
    }
    return false;
}

inline bool dominates(const CpNet& cp, const Outcome& a, const Outcome& b,
                      std::size_t max_outcomes = kDefaultMaxOutcomes) {
    return dominates(induced_graph(cp, max_outcomes), a, b);
}

}  // namespace cpnet
