#pragma once

// Hand-built nets over the cpu/memory/price VM-provisioning domain, used all
// over the suite. One provider strategy per resource focus plus the three
// consumer requests the selection scenario needs.

#include <map>
#include <string>
#include <vector>

#include "cpnet/cpnet.hpp"
#include "cpnet/induced.hpp"
#include "cpnet/semantic_table.hpp"

namespace fixtures {

inline cpnet::SemanticTable vm_table() {
    using cpnet::AttributeSpec;
    using cpnet::SemanticInterval;
    std::vector<AttributeSpec> attrs{
        AttributeSpec{"cpu", {{"low", 0, 40}, {"moderate", 41, 70}, {"high", 71, 100}}},
        AttributeSpec{"memory", {{"low", 0, 40}, {"moderate", 41, 70}, {"high", 71, 100}}},
        AttributeSpec{"price", {{"low", 0, 40}, {"moderate", 41, 70}, {"high", 71, 100}}},
    };
    return cpnet::SemanticTable(attrs);
}

inline cpnet::PreferenceStatement row(std::map<std::string, int> condition, std::vector<int> order) {
    cpnet::PreferenceStatement st;
    st.condition = std::move(condition);
    st.order = std::move(order);
    return st;
}

inline cpnet::CpNet chain_net(const std::vector<std::string>& chain,
                              std::map<std::string, std::vector<cpnet::PreferenceStatement>> rows) {
    cpnet::CpNet cp;
    cp.table = vm_table();
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) edges.emplace_back(chain[i], chain[i + 1]);
    cp.graph = cpnet::DependencyGraph({"cpu", "memory", "price"}, edges);
    for (auto& [name, statements] : rows) {
        cpnet::Cpt cpt;
        cpt.attribute = name;
        cpt.parents = cp.graph.parents_of(name);
        cpt.rows = std::move(statements);
        cp.cpts[name] = std::move(cpt);
    }
    cpnet::normalize(cp);
    return cp;
}

/// CPU-intensive provider strategy: high CPU first, memory tracks CPU, price
/// tracks memory; the two price rows agree (high price preferred).
inline cpnet::CpNet cpu_provider() {
    return chain_net({"cpu", "memory", "price"},
                     {{"cpu", {row({}, {3, 2})}},
                      {"memory", {row({{"cpu", 3}}, {2, 3}), row({{"cpu", 2}}, {3, 2})}},
                      {"price", {row({{"memory", 3}}, {3, 2}), row({{"memory", 2}}, {3, 2})}}});
}

/// Same strategy with the full price scale ranked (low price tolerated last),
/// so outcomes involving the low price level exist.
inline cpnet::CpNet cpu_provider_full() {
    return chain_net({"cpu", "memory", "price"},
                     {{"cpu", {row({}, {3, 2})}},
                      {"memory", {row({{"cpu", 3}}, {2, 3}), row({{"cpu", 2}}, {3, 2})}},
                      {"price", {row({{"memory", 3}}, {3, 2, 1}), row({{"memory", 2}}, {3, 2, 1})}}});
}

/// Memory-intensive provider strategy on the memory-first chain. Its graph
/// cannot merge with the cpu-first chain without a cycle.
inline cpnet::CpNet memory_provider() {
    return chain_net({"memory", "cpu", "price"},
                     {{"memory", {row({}, {3, 2})}},
                      {"cpu", {row({{"memory", 3}}, {2, 3}), row({{"memory", 2}}, {3, 2})}},
                      {"price", {row({{"cpu", 3}}, {3, 2}), row({{"cpu", 2}}, {2, 3})}}});
}

/// Price-sensitive consumer: cheapest first, memory and CPU track the budget.
inline cpnet::CpNet price_consumer() {
    return chain_net({"price", "memory", "cpu"},
                     {{"price", {row({}, {1, 2})}},
                      {"memory", {row({{"price", 1}}, {2, 3}), row({{"price", 2}}, {3, 2})}},
                      {"cpu", {row({{"memory", 2}}, {2, 3}), row({{"memory", 3}}, {3, 2})}}});
}

/// Memory-intensive consumer encoded on the provider's cpu-first chain: only
/// high memory is acceptable under high CPU, and a high price is tolerated
/// for high memory.
inline cpnet::CpNet memory_consumer() {
    return chain_net({"cpu", "memory", "price"},
                     {{"cpu", {row({}, {3, 2})}},
                      {"memory", {row({{"cpu", 3}}, {3}), row({{"cpu", 2}}, {3, 2})}},
                      {"price", {row({{"memory", 3}}, {3, 2}), row({{"memory", 2}}, {2, 3})}}});
}

/// CPU-intensive consumer: mirrors the provider except for preferring the
/// moderate price when memory is moderate.
inline cpnet::CpNet cpu_consumer() {
    return chain_net({"cpu", "memory", "price"},
                     {{"cpu", {row({}, {3, 2})}},
                      {"memory", {row({{"cpu", 3}}, {2, 3}), row({{"cpu", 2}}, {3, 2})}},
                      {"price", {row({{"memory", 3}}, {3, 2}), row({{"memory", 2}}, {2, 3})}}});
}

inline cpnet::Outcome outcome(int cpu, int memory, int price) { return cpnet::Outcome{{cpu, memory, price}}; }

}  // namespace fixtures
