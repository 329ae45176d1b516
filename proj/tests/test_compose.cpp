#include <catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "cpnet/compose.hpp"
#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"

#include "fixtures.hpp"
#include "oracle.hpp"

using cpnet::ComposabilityVerdict;
using cpnet::CpNet;
using cpnet::Cpt;
using cpnet::DependencyGraph;
using cpnet::PreferenceStatement;

namespace {

bool has_reason(const ComposabilityVerdict& verdict, ComposabilityVerdict::ReasonCode code) {
    return std::any_of(verdict.reasons.begin(), verdict.reasons.end(),
                       [&](const ComposabilityVerdict::Reason& r) { return r.code == code; });
}

const PreferenceStatement& row_of(const CpNet& cp, const std::string& attr,
                                  const std::map<std::string, int>& condition) {
    const PreferenceStatement* row = cp.cpts.at(attr).find_row(condition);
    REQUIRE(row != nullptr);
    return *row;
}

// Two valid nets over the diamond-free graph {cpu->price, memory->price} whose
// price CPTs cover different corners of the merged condition space.
CpNet corner_net(int cpu_level, std::vector<int> memory_order) {
    CpNet cp;
    cp.table = fixtures::vm_table();
    cp.graph = DependencyGraph({"cpu", "memory", "price"}, {{"cpu", "price"}, {"memory", "price"}});
    cp.cpts["cpu"] = Cpt{"cpu", {}, {fixtures::row({}, {cpu_level})}};
    cp.cpts["memory"] = Cpt{"memory", {}, {fixtures::row({}, memory_order)}};
    Cpt price{"price", {"cpu", "memory"}, {}};
    for (int m : memory_order) price.rows.push_back(fixtures::row({{"cpu", cpu_level}, {"memory", m}}, {3, 2}));
    cp.cpts["price"] = price;
    cpnet::normalize(cp);
    return cp;
}

}  // namespace

TEST_CASE("graph merging takes the union and judges nothing") {
    DependencyGraph cpu_chain = fixtures::cpu_provider().graph;
    DependencyGraph price_chain = fixtures::price_consumer().graph;
    DependencyGraph merged = cpnet::merge_graphs(cpu_chain, price_chain);
    CHECK(merged.nodes().size() == 3);
    CHECK(merged.edges().size() == 4);
    CHECK_FALSE(merged.is_acyclic());

    CHECK(cpnet::graphs_composable(cpu_chain, cpu_chain));
    CHECK_FALSE(cpnet::graphs_composable(cpu_chain, price_chain));
}

TEST_CASE("order conflict detection looks only at shared pairs") {
    CHECK(cpnet::detail::orders_conflict({3, 2}, {2, 3}));
    CHECK_FALSE(cpnet::detail::orders_conflict({3}, {2, 3}));      // no shared pair
    CHECK_FALSE(cpnet::detail::orders_conflict({3, 2}, {3, 2, 1}));
    CHECK_FALSE(cpnet::detail::orders_conflict({2, 1}, {3, 1}));   // only one shared level
}

TEST_CASE("order merging interleaves and prefers the first argument on ties") {
    CHECK(cpnet::detail::merge_orders({3, 2}, {3, 2, 1}) == std::vector<int>{3, 2, 1});
    CHECK(cpnet::detail::merge_orders({3}, {2, 3}) == std::vector<int>{2, 3});
    CHECK(cpnet::detail::merge_orders({1, 3}, {2, 3}) == std::vector<int>{1, 2, 3});
    CHECK(cpnet::detail::merge_orders({2, 3}, {1, 3}) == std::vector<int>{2, 1, 3});
    CHECK_THROWS_MATCHES(cpnet::detail::merge_orders({3, 2}, {2, 3}), cpnet::Error,
                         Catch::Matchers::Predicate<cpnet::Error>(
                             [](const cpnet::Error& e) { return e.code() == cpnet::ErrorCode::NotComposable; }));
}

TEST_CASE("composability verdicts name every failure") {
    SECTION("reversed shared pair is a semantic incongruence") {
        ComposabilityVerdict v = cpnet::composable(fixtures::cpu_provider(), fixtures::cpu_consumer());
        CHECK_FALSE(v.composable);
        CHECK(has_reason(v, ComposabilityVerdict::ReasonCode::SemanticIncongruence));
        CHECK_FALSE(has_reason(v, ComposabilityVerdict::ReasonCode::GraphCycle));
    }
    SECTION("opposite chains cycle and disagree on parents") {
        ComposabilityVerdict v = cpnet::composable(fixtures::cpu_provider(), fixtures::price_consumer());
        CHECK_FALSE(v.composable);
        CHECK(has_reason(v, ComposabilityVerdict::ReasonCode::GraphCycle));
        CHECK(has_reason(v, ComposabilityVerdict::ReasonCode::CPTParentMismatch));
    }
    SECTION("different node sets over one table") {
        CpNet partial;
        partial.table = fixtures::vm_table();
        partial.graph = DependencyGraph({"cpu", "memory"}, {{"cpu", "memory"}});
        partial.cpts["cpu"] = Cpt{"cpu", {}, {fixtures::row({}, {3, 2})}};
        partial.cpts["memory"] = Cpt{"memory", {"cpu"},
                                     {fixtures::row({{"cpu", 3}}, {2, 3}), fixtures::row({{"cpu", 2}}, {3, 2})}};
        ComposabilityVerdict v = cpnet::composable(partial, fixtures::cpu_provider());
        CHECK_FALSE(v.composable);
        CHECK(has_reason(v, ComposabilityVerdict::ReasonCode::AttributeMismatch));
    }
    SECTION("different attribute universes are an error, not a verdict") {
        CpNet other = fixtures::cpu_provider();
        other.table = cpnet::SemanticTable({{"cpu", {{"low", 0, 40}, {"moderate", 41, 70}, {"high", 71, 100}}},
                                            {"disk", {{"small", 0, 9}, {"large", 10, 99}}},
                                            {"price", {{"low", 0, 40}, {"moderate", 41, 70}, {"high", 71, 100}}}});
        CHECK_THROWS_MATCHES(cpnet::composable(fixtures::cpu_provider(), other), cpnet::Error,
                             Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                                 return e.code() == cpnet::ErrorCode::TableMismatch;
                             }));
    }
    SECTION("agreeing nets compose") {
        ComposabilityVerdict v = cpnet::composable(fixtures::memory_consumer(), fixtures::cpu_consumer());
        CHECK(v.composable);
        CHECK(v.reasons.empty());
    }
}

TEST_CASE("merged CPTs must cover every reachable merged condition") {
    // A mentions cpu {2} x memory {2,3}; B mentions cpu {2,3} x memory {2}.
    // The merged space reaches {cpu=3, memory=3}, which neither price CPT covers.
    CpNet a = corner_net(2, {2, 3});
    CpNet b = corner_net(3, {2});
    REQUIRE(cpnet::is_valid(a));
    REQUIRE(cpnet::is_valid(b));

    ComposabilityVerdict v = cpnet::composable(a, b);
    CHECK_FALSE(v.composable);
    REQUIRE(v.reasons.size() == 1);
    CHECK(v.reasons.front().code == ComposabilityVerdict::ReasonCode::SemanticIncongruence);
    CHECK(v.reasons.front().detail.find("uncovered") != std::string::npos);
    CHECK_THROWS_AS(cpnet::compose(a, b), cpnet::Error);

    // Covering the missing corner on either side heals the pair.
    CpNet b_full = corner_net(3, {2, 3});
    CHECK(cpnet::composable(a, b_full).composable);
}

TEST_CASE("composition merges orders and sums effective demands") {
    CpNet out = cpnet::compose(fixtures::memory_consumer(), fixtures::cpu_consumer());
    REQUIRE(cpnet::validate(out).empty());
    CHECK(out.table == fixtures::vm_table());
    CHECK(out.graph.edges().size() == 2);

    const PreferenceStatement& cpu_row = row_of(out, "cpu", {});
    CHECK(cpu_row.order == std::vector<int>{3, 2});
    CHECK(cpu_row.demand == 6);  // 3 + 3, beyond the 3-level scale and recorded as-is

    // [3] and [2,3] interleave to [2,3]; demands 3 and 2 sum to 5
    const PreferenceStatement& mem_high = row_of(out, "memory", {{"cpu", 3}});
    CHECK(mem_high.order == std::vector<int>{2, 3});
    CHECK(mem_high.demand == 5);
    CHECK(row_of(out, "memory", {{"cpu", 2}}).demand == 6);

    CHECK(row_of(out, "price", {{"memory", 3}}).order == std::vector<int>{3, 2});
    CHECK(row_of(out, "price", {{"memory", 3}}).demand == 6);
    CHECK(row_of(out, "price", {{"memory", 2}}).order == std::vector<int>{2, 3});
    CHECK(row_of(out, "price", {{"memory", 2}}).demand == 4);
}

TEST_CASE("self-composition keeps every order and doubles every demand") {
    CpNet cp = fixtures::cpu_provider();
    CpNet out = cpnet::compose(cp, cp);
    REQUIRE(cpnet::validate(out).empty());
    for (const auto& [name, cpt] : cp.cpts) {
        for (const PreferenceStatement& row : cpt.rows) {
            const PreferenceStatement& merged = row_of(out, name, row.condition);
            CHECK(merged.order == row.order);
            CHECK(merged.demand == 2 * row.effective_demand());
        }
    }
}

TEST_CASE("partial orders widen instead of conflicting") {
    CpNet out = cpnet::compose(fixtures::cpu_provider_full(), fixtures::cpu_provider());
    REQUIRE(cpnet::validate(out).empty());
    const PreferenceStatement& price = row_of(out, "price", {{"memory", 2}});
    CHECK(price.order == std::vector<int>{3, 2, 1});
    CHECK(price.demand == 6);
}

TEST_CASE("conditions covered by one side only carry their own demand") {
    CpNet p, q;
    p.table = q.table = fixtures::vm_table();
    p.graph = q.graph = DependencyGraph({"cpu", "memory", "price"}, {{"cpu", "memory"}});
    p.cpts["cpu"] = Cpt{"cpu", {}, {fixtures::row({}, {2})}};
    p.cpts["memory"] = Cpt{"memory", {"cpu"}, {fixtures::row({{"cpu", 2}}, {3, 2})}};
    p.cpts["price"] = Cpt{"price", {}, {fixtures::row({}, {1, 2})}};
    q.cpts["cpu"] = Cpt{"cpu", {}, {fixtures::row({}, {3})}};
    q.cpts["memory"] = Cpt{"memory", {"cpu"}, {fixtures::row({{"cpu", 3}}, {2, 3})}};
    q.cpts["price"] = Cpt{"price", {}, {fixtures::row({}, {1, 2})}};
    REQUIRE(cpnet::is_valid(p));
    REQUIRE(cpnet::is_valid(q));

    CpNet out = cpnet::compose(p, q);
    REQUIRE(cpnet::validate(out).empty());
    CHECK(row_of(out, "cpu", {}).order == std::vector<int>{2, 3});  // disjoint singletons; first argument leads
    CHECK(row_of(out, "cpu", {}).demand == 5);
    CHECK(row_of(out, "memory", {{"cpu", 2}}).demand == 3);  // only p covers this condition
    CHECK(row_of(out, "memory", {{"cpu", 3}}).demand == 2);  // only q covers this condition
    CHECK(row_of(out, "price", {}).demand == 2);             // 1 + 1
}

TEST_CASE("composition of identical-universe nets is order-insensitive in content") {
    CpNet ab = cpnet::compose(fixtures::memory_consumer(), fixtures::cpu_consumer());
    CpNet ba = cpnet::compose(fixtures::cpu_consumer(), fixtures::memory_consumer());
    CHECK(ab.cpts == ba.cpts);
    CHECK(ab.table == ba.table);
}

TEST_CASE("compose_all folds left and reports the offending pair") {
    SECTION("singleton folds to an exact copy") {
        CpNet cp = fixtures::cpu_provider();
        CHECK(cpnet::compose_all({cp}) == cp);
    }
    SECTION("empty input is rejected") {
        CHECK_THROWS_MATCHES(cpnet::compose_all({}), cpnet::Error,
                             Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                                 return e.code() == cpnet::ErrorCode::InvalidInput;
                             }));
    }
    SECTION("two-net fold equals direct composition") {
        CHECK(cpnet::compose_all({fixtures::memory_consumer(), fixtures::cpu_consumer()}) ==
              cpnet::compose(fixtures::memory_consumer(), fixtures::cpu_consumer()));
    }
    SECTION("pairwise failure names both inputs") {
        try {
            cpnet::compose_all({fixtures::cpu_provider(), fixtures::price_consumer()});
            FAIL("expected NotComposable");
        } catch (const cpnet::Error& e) {
            CHECK(e.code() == cpnet::ErrorCode::NotComposable);
            CHECK(std::string(e.what()).find("inputs 0 and 1") != std::string::npos);
        }
        try {
            cpnet::compose_all({fixtures::memory_consumer(), fixtures::cpu_consumer(), fixtures::cpu_provider()});
            FAIL("expected NotComposable");
        } catch (const cpnet::Error& e) {
            CHECK(e.code() == cpnet::ErrorCode::NotComposable);
            CHECK(std::string(e.what()).find("inputs 0 and 2") != std::string::npos);
        }
    }
}

TEST_CASE("composition output always validates", "[property]") {
    // every composable fixture pair, composed both ways, yields a valid net
    std::vector<CpNet> nets = {fixtures::cpu_provider(),  fixtures::cpu_provider_full(),
                               fixtures::memory_provider(), fixtures::price_consumer(),
                               fixtures::memory_consumer(), fixtures::cpu_consumer()};
    int composed = 0;
    for (const CpNet& a : nets) {
        for (const CpNet& b : nets) {
            if (!cpnet::composable(a, b).composable) continue;
            ++composed;
            CpNet out = cpnet::compose(a, b);
            INFO("composing nets with " << a.cpts.at("price").rows.size() << " and "
                                        << b.cpts.at("price").rows.size() << " price rows");
            CHECK(cpnet::validate(out).empty());
        }
    }
    CHECK(composed >= 8);  // at least the self-compositions and the consumer pair
}
