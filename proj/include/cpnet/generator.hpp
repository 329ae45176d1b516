#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"
#include "cpnet/semantic_table.hpp"

namespace cpnet {

enum class GraphShape { Chain, RandomDag };

/// Knobs for seeded random instances. Identical (seed, config) pairs always
/// produce identical nets; all draws go through modulo/Fisher-Yates helpers
/// so results do not depend on the standard library's distribution internals.
struct GeneratorConfig {
    std::uint64_t seed = 0;
    int attribute_count = 3;
    int levels_per_attribute = 3;
    long long domain_size = 20;      // raw numeric units per attribute, [0, domain_size)
    GraphShape graph_shape = GraphShape::Chain;
    bool complete_orders = true;     // false: rows rank random non-empty subsets
    double dag_edge_probability = 0.3;
    int dag_max_parents = 3;

    // consumer derivation (perturbation of a provider)
    int min_consumer_levels = 2;     // lower bound on the per-attribute prefix
    double clone_rate = 0.05;        // chance the consumer is the provider verbatim
    double graph_mutation_rate = 0.30;   // chance the consumer redraws its whole structure
    double row_mutation_rate = 0.25;     // chance a kept row redraws its order
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream-independent derived seeds: mix_seed(s, k) for k = 0, 1, ...
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

template <typename T>
inline void shuffle(std::mt19937_64& rng, std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[draw_index(rng, i)]);
}

/// Uniform random strict total order over [1, levels].
inline std::vector<int> random_order(std::mt19937_64& rng, int levels) {
    std::vector<int> order(static_cast<std::size_t>(levels));
    for (int i = 0; i < levels; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    shuffle(rng, order);
    return order;
}

/// Uniform random order over a uniform non-empty subset of [1, levels].
inline std::vector<int> random_partial_order(std::mt19937_64& rng, int levels) {
    std::vector<int> chosen;
    while (chosen.empty()) {
        chosen.clear();
        for (int i = 1; i <= levels; ++i)
            if (rng() & 1u) chosen.push_back(i);
    }
    shuffle(rng, chosen);
    return chosen;
}

}  // namespace detail

/// Equal-width interval partition of [0, domain_size) per attribute, the
/// remainder folded into the top level. Attributes are named a1, a2, ...
inline SemanticTable random_semantic_table(const GeneratorConfig& cfg) {
    if (cfg.attribute_count < 1) fail(ErrorCode::InvalidInput, "attribute_count must be at least 1");
    if (cfg.levels_per_attribute < 2) fail(ErrorCode::InvalidInput, "levels_per_attribute must be at least 2");
    if (cfg.domain_size < cfg.levels_per_attribute)
        fail(ErrorCode::InvalidInput, "domain_size too small for the requested level count");
    std::vector<AttributeSpec> attrs;
    long long width = cfg.domain_size / cfg.levels_per_attribute;
    for (int i = 0; i < cfg.attribute_count; ++i) {
        AttributeSpec spec;
        spec.name = "a" + std::to_string(i + 1);
        for (int lvl = 0; lvl < cfg.levels_per_attribute; ++lvl) {
            long long lo = width * lvl;
            long long hi = lvl + 1 == cfg.levels_per_attribute ? cfg.domain_size - 1 : width * (lvl + 1) - 1;
            spec.levels.push_back(SemanticInterval{"l" + std::to_string(lvl + 1), lo, hi});
        }
        attrs.push_back(std::move(spec));
    }
    return SemanticTable(std::move(attrs));
}

/// Restriction of `provider` to a random contiguous prefix of each attribute's
/// levels (at least cfg.min_consumer_levels, at most everything). Drawing the
/// full count reproduces the provider's table, value mapping preserved.
inline SemanticTable consumer_table_subset(const SemanticTable& provider, const GeneratorConfig& cfg,
                                           std::mt19937_64& rng) {
    std::vector<AttributeSpec> attrs;
    for (const AttributeSpec& spec : provider.attributes()) {
        int total = static_cast<int>(spec.levels.size());
        int lower = std::min(std::max(cfg.min_consumer_levels, 2), total);
        int keep = lower + static_cast<int>(detail::draw_index(rng, static_cast<std::size_t>(total - lower + 1)));
        AttributeSpec cut;
        cut.name = spec.name;
        cut.levels.assign(spec.levels.begin(), spec.levels.begin() + keep);
        attrs.push_back(std::move(cut));
    }
    return SemanticTable(std::move(attrs));
}

inline SemanticTable consumer_table_subset(const SemanticTable& provider, const GeneratorConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    return consumer_table_subset(provider, cfg, rng);
}

namespace detail {

inline DependencyGraph random_graph(const SemanticTable& table, const GeneratorConfig& cfg,
                                    std::mt19937_64& rng) {
    std::vector<std::string> nodes;
    for (const AttributeSpec& spec : table.attributes()) nodes.push_back(spec.name);
    std::vector<std::string> order = nodes;
    shuffle(rng, order);
    std::vector<std::pair<std::string, std::string>> edges;
    if (cfg.graph_shape == GraphShape::Chain) {
        for (std::size_t i = 0; i + 1 < order.size(); ++i) edges.emplace_back(order[i], order[i + 1]);
    } else {
        std::vector<int> parent_count(order.size(), 0);
        for (std::size_t j = 1; j < order.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                if (parent_count[j] < cfg.dag_max_parents && draw_unit(rng) < cfg.dag_edge_probability) {
                    edges.emplace_back(order[i], order[j]);
                    ++parent_count[j];
                }
    }
    return DependencyGraph(std::move(nodes), std::move(edges));
}

/// Fills CPTs over `graph` walking attributes topologically so each parent's
/// mentioned levels are fixed before its children draw rows.
inline CpNet fill_random_cpts(const SemanticTable& table, DependencyGraph graph, const GeneratorConfig& cfg,
                              std::mt19937_64& rng) {
    CpNet cp;
    cp.table = table;
    cp.graph = std::move(graph);
    std::map<std::string, std::vector<int>> ment;
    std::optional<std::vector<std::string>> order = cp.graph.topological_order();
    for (const std::string& name : *order) {
        Cpt cpt;
        cpt.attribute = name;
        cpt.parents = cp.graph.parents_of(name);
        std::sort(cpt.parents.begin(), cpt.parents.end());
        int levels = table.level_count(name);
        std::set<int> mentioned;
        detail::for_each_assignment(cpt.parents, ment, [&](const std::map<std::string, int>& condition) {
            PreferenceStatement row;
            row.condition = condition;
            row.order = cfg.complete_orders ? random_order(rng, levels) : random_partial_order(rng, levels);
            mentioned.insert(row.order.begin(), row.order.end());
            cpt.rows.push_back(std::move(row));
        });
        ment[name] = std::vector<int>(mentioned.begin(), mentioned.end());
        cp.cpts[name] = std::move(cpt);
    }
    normalize(cp);
    return cp;
}

}  // namespace detail

/// Seeded random CP-Net over `table`: random chain (or sparse DAG) plus
/// uniformly drawn orders, complete by default. Always valid by construction.
inline CpNet random_cpnet(const SemanticTable& table, const GeneratorConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    DependencyGraph graph = detail::random_graph(table, cfg, rng);
    return detail::fill_random_cpts(table, std::move(graph), cfg, rng);
}

/// A consumer request statistically correlated with `provider`: with
/// probability graph_mutation_rate the consumer redraws everything from
/// scratch; otherwise it inherits the provider's structure restricted to the
/// consumer table, each row independently redrawn with row_mutation_rate.
inline CpNet derive_consumer(const CpNet& provider, const SemanticTable& consumer_table,
                             const GeneratorConfig& cfg, std::mt19937_64& rng) {
    if (detail::draw_unit(rng) < cfg.graph_mutation_rate) {
        GeneratorConfig fresh = cfg;
        fresh.seed = rng();
        return random_cpnet(consumer_table, fresh);
    }
    CpNet cp;
    cp.table = consumer_table;
    cp.graph = provider.graph;
    std::map<std::string, std::vector<int>> ment;
    std::optional<std::vector<std::string>> order = cp.graph.topological_order();
    for (const std::string& name : *order) {
        const Cpt& source = provider.cpts.at(name);
        Cpt cpt;
        cpt.attribute = name;
        cpt.parents = source.parents;
        int levels = consumer_table.level_count(name);
        std::set<int> mentioned;
        detail::for_each_assignment(cpt.parents, ment, [&](const std::map<std::string, int>& condition) {
            PreferenceStatement row;
            row.condition = condition;
            if (detail::draw_unit(rng) < cfg.row_mutation_rate) {
                row.order = cfg.complete_orders ? detail::random_order(rng, levels)
                                                : detail::random_partial_order(rng, levels);
            } else if (const PreferenceStatement* base = source.find_row(condition)) {
                for (int level : base->order)
                    if (level <= levels) row.order.push_back(level);
            }
            if (row.order.empty())
                row.order = cfg.complete_orders ? detail::random_order(rng, levels)
                                                : detail::random_partial_order(rng, levels);
            mentioned.insert(row.order.begin(), row.order.end());
            cpt.rows.push_back(std::move(row));
        });
        ment[name] = std::vector<int>(mentioned.begin(), mentioned.end());
        cp.cpts[name] = std::move(cpt);
    }
    normalize(cp);
    return cp;
}

/// One consumer draw for a pool: a verbatim clone with probability
/// clone_rate, otherwise a perturbed request over a prefix table.
inline CpNet random_consumer(const CpNet& provider, const GeneratorConfig& cfg, std::mt19937_64& rng) {
    if (detail::draw_unit(rng) < cfg.clone_rate) return provider;
    SemanticTable table = consumer_table_subset(provider.table, cfg, rng);
    return derive_consumer(provider, table, cfg, rng);
}

}  // namespace cpnet
