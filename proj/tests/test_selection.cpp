#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "cpnet/error.hpp"
#include "cpnet/selection.hpp"

#include "fixtures.hpp"

using cpnet::CapacityConstraint;
using cpnet::Consumer;
using cpnet::CpNet;
using cpnet::ResidualNet;
using cpnet::SelectionResult;
using cpnet::Strategy;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kEps = 1e-12;

// Three consumers against the cpu-chain provider: one near-identical, one
// restricted, one on the opposite dependency chain.
std::vector<Consumer> pool() {
    return {{"c_cpu", fixtures::cpu_consumer()},
            {"c_mem", fixtures::memory_consumer()},
            {"c_price", fixtures::price_consumer()}};
}

bool code_is(const cpnet::Error& e, cpnet::ErrorCode code) { return e.code() == code; }

}  // namespace

TEST_CASE("difference removes rows the selected net covers") {
    SECTION("a net covers itself completely") {
        CpNet cp = fixtures::cpu_provider();
        ResidualNet residual = cpnet::difference_cpnet(cp, cp);
        CHECK(residual.zero());
    }
    SECTION("near-identical consumer leaves one uncovered price row") {
        // both provider price rows are [3,2]; the consumer offers only one
        // matching pattern ({memory=3}), and the provider's {memory=2} row
        // claims it first via fulfillment, leaving {memory=3} open
        ResidualNet residual = cpnet::difference_cpnet(fixtures::cpu_provider(), fixtures::cpu_consumer());
        CHECK_FALSE(residual.zero());
        int open_rows = 0;
        for (const auto& [name, cpt] : residual.cpts)
            for (const auto& row : cpt.rows)
                if (!row.order.empty()) {
                    ++open_rows;
                    CHECK(name == "price");
                    CHECK(row.condition == std::map<std::string, int>{{"memory", 3}});
                }
        CHECK(open_rows == 1);
    }
    SECTION("a stronger condition covers a weaker row") {
        // the leftover provider row {memory=2}: [3,2] is satisfied by the
        // consumer's {memory=3}: [3,2] because {memory=3} fulfills {memory=2}
        ResidualNet residual = cpnet::difference_cpnet(fixtures::cpu_provider(), fixtures::cpu_consumer());
        residual = cpnet::difference_cpnet(residual, fixtures::memory_consumer());
        CHECK(residual.zero());
    }
    SECTION("mismatched graphs are an error") {
        CHECK_THROWS_MATCHES(cpnet::difference_cpnet(fixtures::cpu_provider(), fixtures::price_consumer()),
                             cpnet::Error, Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                                 return code_is(e, cpnet::ErrorCode::GraphMismatch);
                             }));
    }
}

TEST_CASE("residual similarity scores only the still-open rows") {
    ResidualNet residual = cpnet::difference_cpnet(fixtures::cpu_provider(), fixtures::cpu_consumer());
    // open: price {memory=2} (weight 3); the candidate's {memory=3} row claims
    // it; every candidate row still counts toward the denominator
    cpnet::SimilarityScore score = cpnet::residual_similarity(residual, fixtures::memory_consumer());
    CHECK_THAT(score.value, WithinAbs(3.0 / 21.0, kEps));
    // graph mismatch scores zero instead of throwing
    CHECK_THAT(cpnet::residual_similarity(residual, fixtures::price_consumer()).value, WithinAbs(0.0, kEps));
}

TEST_CASE("capacity checks aggregate demand per attribute") {
    CpNet doubled = cpnet::compose(fixtures::cpu_consumer(), fixtures::cpu_consumer());
    CHECK(cpnet::respects_capacity(doubled, CapacityConstraint{}));  // disabled: anything goes
    CHECK_FALSE(cpnet::respects_capacity(doubled, CapacityConstraint{true, {}}));  // demand 6 on a 3-level scale
    CHECK(cpnet::respects_capacity(fixtures::cpu_consumer(), CapacityConstraint{true, {}}));
    CHECK_FALSE(cpnet::respects_capacity(fixtures::cpu_consumer(), CapacityConstraint{true, {{"cpu", 2}}}));
    CHECK(cpnet::respects_capacity(fixtures::cpu_consumer(), CapacityConstraint{true, {{"cpu", 3}}}));
}

TEST_CASE("brute force scans every non-empty subset") {
    SelectionResult result = cpnet::brute_force_select(fixtures::cpu_provider(), pool());
    CHECK(result.strategy == Strategy::BruteForce);
    CHECK(result.candidates_examined == 7);  // 2^3 - 1, infeasible subsets included
    // {c_cpu} alone and {c_cpu, c_mem} both score 2.5; the larger subset wins
    CHECK(result.chosen == std::vector<std::string>{"c_cpu", "c_mem"});
    CHECK_THAT(result.score.value, WithinAbs(2.5, kEps));
    REQUIRE(result.composed.has_value());
    CHECK(cpnet::validate(*result.composed).empty());
}

TEST_CASE("brute force input guards") {
    CHECK_THROWS_MATCHES(cpnet::brute_force_select(fixtures::cpu_provider(), {}), cpnet::Error,
                         Catch::Matchers::Predicate<cpnet::Error>(
                             [](const cpnet::Error& e) { return code_is(e, cpnet::ErrorCode::InvalidInput); }));
    std::vector<Consumer> too_many;
    for (int i = 0; i < 21; ++i) too_many.push_back({"c" + std::to_string(i), fixtures::cpu_consumer()});
    CHECK_THROWS_MATCHES(cpnet::brute_force_select(fixtures::cpu_provider(), too_many), cpnet::Error,
                         Catch::Matchers::Predicate<cpnet::Error>(
                             [](const cpnet::Error& e) { return code_is(e, cpnet::ErrorCode::InvalidInput); }));
}

TEST_CASE("ties at equal score and size go to the smallest id list") {
    // capacity keeps pairs out (composed demand 6 > scale), so two clone
    // singletons tie at 2.5 and the lexicographically smaller id wins
    std::vector<Consumer> clones = {{"beta", fixtures::cpu_consumer()}, {"alpha", fixtures::cpu_consumer()}};
    SelectionResult result =
        cpnet::brute_force_select(fixtures::cpu_provider(), clones, CapacityConstraint{true, {}});
    CHECK(result.chosen == std::vector<std::string>{"alpha"});
    CHECK(result.candidates_examined == 3);
}

TEST_CASE("capacity can rule out every subset") {
    CHECK_THROWS_MATCHES(
        cpnet::brute_force_select(fixtures::cpu_provider(), pool(), CapacityConstraint{true, {{"cpu", 2}}}),
        cpnet::Error, Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
            return code_is(e, cpnet::ErrorCode::NoComposableSubset);
        }));
}

TEST_CASE("greedy covers the provider row by row") {
    SelectionResult result = cpnet::greedy_select(fixtures::cpu_provider(), pool());
    CHECK(result.strategy == Strategy::Greedy);
    CHECK(result.chosen == std::vector<std::string>{"c_cpu", "c_mem"});
    CHECK_THAT(result.score.value, WithinAbs(2.5, kEps));
    CHECK(result.candidates_examined == 5);  // 3 in the seeding pass + 2 in the cover round
    REQUIRE(result.composed.has_value());
    CHECK(cpnet::validate(*result.composed).empty());
}

TEST_CASE("greedy fails loudly when nothing resembles the provider") {
    std::vector<Consumer> hopeless = {{"c_price", fixtures::price_consumer()}};
    CHECK_THROWS_MATCHES(cpnet::greedy_select(fixtures::cpu_provider(), hopeless), cpnet::Error,
                         Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                             return code_is(e, cpnet::ErrorCode::NoComposableSubset);
                         }));
}

TEST_CASE("heuristic prefilters by relative similarity") {
    SECTION("threshold 0.2 drops the opposite-chain consumer") {
        SelectionResult result = cpnet::heuristic_select(fixtures::cpu_provider(), pool(), 0.2);
        CHECK(result.strategy == Strategy::Heuristic);
        CHECK_THAT(result.threshold, WithinAbs(0.2, kEps));
        CHECK(result.candidates_examined == 3);  // two survivors, three subsets
        CHECK(result.chosen == std::vector<std::string>{"c_cpu", "c_mem"});
        CHECK_THAT(result.score.value, WithinAbs(2.5, kEps));
    }
    SECTION("threshold 0 reproduces brute force exactly") {
        SelectionResult brute = cpnet::brute_force_select(fixtures::cpu_provider(), pool());
        SelectionResult heuristic = cpnet::heuristic_select(fixtures::cpu_provider(), pool(), 0.0);
        CHECK(heuristic.chosen == brute.chosen);
        CHECK(heuristic.candidates_examined == brute.candidates_examined);
        CHECK_THAT(heuristic.score.value, WithinAbs(brute.score.value, kEps));
    }
    SECTION("a high threshold can empty the pool") {
        CHECK_THROWS_MATCHES(cpnet::heuristic_select(fixtures::cpu_provider(), pool(), 0.8), cpnet::Error,
                             Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                                 return code_is(e, cpnet::ErrorCode::NoComposableSubset);
                             }));
    }
    SECTION("thresholds outside the unit interval are rejected") {
        CHECK_THROWS_MATCHES(cpnet::heuristic_select(fixtures::cpu_provider(), pool(), 1.5), cpnet::Error,
                             Catch::Matchers::Predicate<cpnet::Error>([](const cpnet::Error& e) {
                                 return code_is(e, cpnet::ErrorCode::InvalidInput);
                             }));
        CHECK_THROWS_AS(cpnet::heuristic_select(fixtures::cpu_provider(), pool(), -0.1), cpnet::Error);
    }
}

TEST_CASE("strategy names render for reports") {
    CHECK(std::string(cpnet::to_string(Strategy::BruteForce)) == "brute");
    CHECK(std::string(cpnet::to_string(Strategy::Greedy)) == "greedy");
    CHECK(std::string(cpnet::to_string(Strategy::Heuristic)) == "heuristic");
}
