#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"
#include "cpnet/induced.hpp"

namespace cpnet {

/// Stand-in score for "the denominator vanished because the nets agree".
inline constexpr double kIdenticalSaturation = 1.0e9;

enum class SimilarityMethod { InducedGraph, CPTExact, RelativePattern };

inline const char* to_string(SimilarityMethod method) {
    switch (method) {
        case SimilarityMethod::InducedGraph: return "induced";
        case SimilarityMethod::CPTExact: return "cpt";
        case SimilarityMethod::RelativePattern: return "pattern";
    }
    return "unknown";
}

struct SimilarityScore {
    double value = 0.0;
    SimilarityMethod method = SimilarityMethod::InducedGraph;
    bool identical = false;
};

/// Maps a score onto [0, 1]: x / (1 + x), with saturated scores pinned to 1.
inline double normalized(const SimilarityScore& score) {
    if (score.identical) return 1.0;
    return score.value / (1.0 + score.value);
}

/// Weight of one statement of `attribute`: the number of outcome contexts the
/// statement reaches, i.e. the product of the level counts of every attribute
/// that is neither the statement's own nor one of its parents.
inline long long statement_weight(const SemanticTable& table, const std::string& attribute,
                                  const std::vector<std::string>& parents) {
    long long weight = 1;
    for (const AttributeSpec& spec : table.attributes()) {
        if (spec.name == attribute) continue;
        if (std::find(parents.begin(), parents.end(), spec.name) != parents.end()) continue;
        weight *= static_cast<long long>(spec.levels.size());
    }
    return weight;
}

/// Rank signature of a statement: positions the mentioned levels take in the
/// order once sorted by semantic index. An order "1 over 3 over 2" yields
/// (1, 3, 2): level 1 sits first, level 2 third, level 3 second.
inline std::vector<int> statement_pattern(const PreferenceStatement& st) {
    std::vector<int> sorted_levels = st.order;
    std::sort(sorted_levels.begin(), sorted_levels.end());
    std::vector<int> pattern;
    pattern.reserve(sorted_levels.size());
    for (int level : sorted_levels) {
        for (std::size_t pos = 0; pos < st.order.size(); ++pos) {
            if (st.order[pos] == level) {
                pattern.push_back(static_cast<int>(pos + 1));
                break;
            }
        }
    }
    return pattern;
}

/// True when `stronger` assigns every attribute of `weaker` a level at least
/// as high. The two conditions must range over the same attributes.
inline bool condition_fulfills(const std::map<std::string, int>& stronger,
                               const std::map<std::string, int>& weaker) {
    if (stronger.size() != weaker.size())
        fail(ErrorCode::AttributeSetMismatch, "conditions range over different attribute sets");
    for (const auto& [attr, level] : weaker) {
        auto it = stronger.find(attr);
        if (it == stronger.end())
            fail(ErrorCode::AttributeSetMismatch, "conditions range over different attribute sets");
        if (it->second < level) return false;
    }
    return true;
}

namespace detail {

inline bool same_attribute_universe(const SemanticTable& a, const SemanticTable& b) {
    if (a.attribute_count() != b.attribute_count()) return false;
    for (std::size_t i = 0; i < a.attribute_count(); ++i)
        if (a.attribute_at(i).name != b.attribute_at(i).name) return false;
    return true;
}

/// Graph equality up to node declaration order.
inline bool graphs_equivalent(const DependencyGraph& a, const DependencyGraph& b) {
    std::vector<std::string> na = a.nodes(), nb = b.nodes();
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    return na == nb && a.edges() == b.edges();
}

struct PatternRow {
    const std::map<std::string, int>* condition;
    std::vector<int> pattern;
};

/// One-to-one pattern matching between two row lists of one attribute. Each
/// left row claims the first unclaimed right row with an equal rank signature
/// whose condition fulfills the left row's. Returns (common, all) tallies in
/// units of `weight`; unmatched rows on either side count toward `all` only.
inline std::pair<long long, long long> match_rows(long long weight, const std::vector<PatternRow>& left,
                                                  const std::vector<PatternRow>& right) {
    std::vector<bool> claimed(right.size(), false);
    long long common = 0;
    long long all = 0;
    for (const PatternRow& row : left) {
        all += weight;
        for (std::size_t i = 0; i < right.size(); ++i) {
            if (claimed[i] || right[i].pattern != row.pattern) continue;
            if (!condition_fulfills(*right[i].condition, *row.condition)) continue;
            claimed[i] = true;
            common += weight;
            break;
        }
    }
    for (std::size_t i = 0; i < right.size(); ++i)
        if (!claimed[i]) all += weight;
    return {common, all};
}

inline std::vector<PatternRow> pattern_rows(const Cpt& cpt) {
    std::vector<PatternRow> rows;
    rows.reserve(cpt.rows.size());
    for (const PreferenceStatement& row : cpt.rows)
        rows.push_back(PatternRow{&row.condition, statement_pattern(row)});
    return rows;
}

}  // namespace detail

/// Similarity of two prebuilt induced graphs: shared edges divided by the
/// edges on which the graphs disagree. Equal edge sets have nothing to divide
/// by and saturate instead.
inline SimilarityScore induced_similarity(const InducedGraph& a, const InducedGraph& b,
                                          double saturation = kIdenticalSaturation) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> shared;
    std::set_intersection(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                          std::back_inserter(shared));
    const double common = static_cast<double>(shared.size());
    const double uni = static_cast<double>(a.edges.size() + b.edges.size()) - common;
    if (uni - common <= 0.0)
        return SimilarityScore{saturation, SimilarityMethod::InducedGraph, true};
    return SimilarityScore{common / (uni - common), SimilarityMethod::InducedGraph, false};
}

/// Builds both induced graphs and compares them. Preconditions: both nets are
/// valid and share the attribute universe.
inline SimilarityScore induced_similarity(const CpNet& a, const CpNet& b,
                                          std::size_t max_outcomes = kDefaultMaxOutcomes,
                                          double saturation = kIdenticalSaturation) {
    if (!detail::same_attribute_universe(a.table, b.table))
        fail(ErrorCode::TableMismatch, "nets are defined over different attribute universes");
    return induced_similarity(induced_graph(a, max_outcomes), induced_graph(b, max_outcomes), saturation);
}

/// (numerator, denominator) pair of a weighted-overlap measure, exposed so
/// callers can reason about the raw tallies rather than the ratio alone.
struct WeightedTally {
    long long common = 0;
    long long total = 0;
};

/// Weighted exact-row overlap: per attribute, statements equal in condition
/// and order (demand annotations ignored) contribute their weight to
/// `common`; the weighted union of both row sets fills `total`. Requires
/// matching dependency graphs.
inline WeightedTally cpt_overlap(const CpNet& a, const CpNet& b) {
    if (!detail::same_attribute_universe(a.table, b.table))
        fail(ErrorCode::TableMismatch, "nets are defined over different attribute universes");
    if (!detail::graphs_equivalent(a.graph, b.graph))
        fail(ErrorCode::GraphMismatch, "CPT similarity requires matching dependency graphs");
    WeightedTally tally;
    for (const auto& [name, cpt_a] : a.cpts) {
        const Cpt& cpt_b = b.cpts.at(name);
        long long weight = statement_weight(a.table, name, cpt_a.parents);
        long long shared = 0;
        for (const PreferenceStatement& row_a : cpt_a.rows) {
            const PreferenceStatement* row_b = cpt_b.find_row(row_a.condition);
            if (row_b && row_b->order == row_a.order) ++shared;
        }
        tally.common += weight * shared;
        tally.total += weight * (static_cast<long long>(cpt_a.rows.size() + cpt_b.rows.size()) - shared);
    }
    return tally;
}

/// Exact-row CPT similarity: cpt_overlap as a ratio in [0, 1].
inline SimilarityScore cpt_similarity(const CpNet& a, const CpNet& b) {
    WeightedTally tally = cpt_overlap(a, b);
    double value = tally.total > 0 ? static_cast<double>(tally.common) / static_cast<double>(tally.total) : 1.0;
    return SimilarityScore{value, SimilarityMethod::CPTExact, tally.common == tally.total};
}

/// Weighted tallies of the pattern matching behind relative similarity.
/// Precondition: the dependency graphs already match.
inline WeightedTally relative_overlap(const CpNet& a, const CpNet& b) {
    WeightedTally tally;
    for (const auto& [name, cpt_a] : a.cpts) {
        auto it_b = b.cpts.find(name);
        if (it_b == b.cpts.end()) continue;
        long long weight = statement_weight(a.table, name, cpt_a.parents);
        auto [c, t] = detail::match_rows(weight, detail::pattern_rows(cpt_a), detail::pattern_rows(it_b->second));
        tally.common += c;
        tally.total += t;
    }
    return tally;
}

/// Pattern-based relative similarity. Nets with differing dependency graphs
/// score 0 outright. Otherwise every statement of `a` tries to claim one
/// statement of `b` with the same rank signature whose condition fulfills its
/// own; claimed statements contribute their weight to the numerator, and all
/// statements of both nets contribute to the denominator.
inline SimilarityScore relative_similarity(const CpNet& a, const CpNet& b) {
    if (!detail::same_attribute_universe(a.table, b.table))
        fail(ErrorCode::TableMismatch, "nets are defined over different attribute universes");
    SimilarityScore score;
    score.method = SimilarityMethod::RelativePattern;
    if (!detail::graphs_equivalent(a.graph, b.graph)) return score;
    WeightedTally tally = relative_overlap(a, b);
    score.value = tally.total > 0 ? static_cast<double>(tally.common) / static_cast<double>(tally.total) : 0.0;
    score.identical = a.cpts == b.cpts;
    return score;
}

}  // namespace cpnet
