#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cpnet/error.hpp"

namespace cpnet {

/// One contiguous slice [lo, hi] of an attribute's raw numeric domain.
struct SemanticInterval {
    std::string label;
    long long lo = 0;
    long long hi = 0;

    friend bool operator==(const SemanticInterval& a, const SemanticInterval& b) {
        return a.label == b.label && a.lo == b.lo && a.hi == b.hi;
    }
};

/// A named attribute with its ordered semantic levels. Level indices are
/// 1-based: index 1 is the lowest interval, index levels.size() the highest.
struct AttributeSpec {
    std::string name;
    std::vector<SemanticInterval> levels;

    friend bool operator==(const AttributeSpec& a, const AttributeSpec& b) {
        return a.name == b.name && a.levels == b.levels;
    }
};

/// A (attribute, level-index) pair produced by table lookups.
struct SemanticLevel {
    std::string attribute;
    int index = 0;

    friend bool operator==(const SemanticLevel& a, const SemanticLevel& b) {
        return a.attribute == b.attribute && a.index == b.index;
    }
};

/// Immutable mapping from raw attribute values to ordered semantic levels.
///
/// Invariants enforced at construction: at least two levels per attribute,
/// intervals contiguous and ascending starting at 0, unique attribute names.
class SemanticTable {
  public:
    SemanticTable() = default;

    explicit SemanticTable(std::vector<AttributeSpec> attributes) : attributes_(std::move(attributes)) {
        for (std::size_t i = 0; i < attributes_.size(); ++i) {
            const AttributeSpec& spec = attributes_[i];
            if (spec.name.empty())
                fail(ErrorCode::InvalidInput, "attribute " + std::to_string(i) + " has an empty name");
            for (std::size_t j = 0; j < i; ++j)
                if (attributes_[j].name == spec.name)
                    fail(ErrorCode::InvalidInput, "duplicate attribute '" + spec.name + "'");
            if (spec.levels.size() < 2)
                fail(ErrorCode::InvalidInput, "attribute '" + spec.name + "' needs at least 2 levels");
            long long expected_lo = 0;
            for (const SemanticInterval& lvl : spec.levels) {
                if (lvl.lo != expected_lo)
                    fail(ErrorCode::InvalidInput,
                         "attribute '" + spec.name + "': interval '" + lvl.label + "' starts at " +
                             std::to_string(lvl.lo) + ", expected " + std::to_string(expected_lo));
                if (lvl.hi < lvl.lo)
                    fail(ErrorCode::InvalidInput,
                         "attribute '" + spec.name + "': interval '" + lvl.label + "' is empty");
                expected_lo = lvl.hi + 1;
            }
        }
    }

    const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }

    /// Position of `name` in declaration order, or -1 if absent.
    int index_of(const std::string& name) const noexcept {
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            if (attributes_[i].name == name) return static_cast<int>(i);
        return -1;
    }

    bool has_attribute(const std::string& name) const noexcept { return index_of(name) >= 0; }

    const AttributeSpec& attribute(const std::string& name) const {
        int pos = index_of(name);
        if (pos < 0) fail(ErrorCode::UnknownAttribute, "no attribute '" + name + "'");
        return attributes_[static_cast<std::size_t>(pos)];
    }

    const AttributeSpec& attribute_at(std::size_t pos) const {
        if (pos >= attributes_.size()) fail(ErrorCode::OutOfRange, "attribute position out of range");
        return attributes_[pos];
    }

    int level_count(const std::string& name) const { return static_cast<int>(attribute(name).levels.size()); }

    const std::string& level_label(const std::string& name, int index) const {
        const AttributeSpec& spec = attribute(name);
        if (index < 1 || index > static_cast<int>(spec.levels.size()))
            fail(ErrorCode::OutOfRange,
                 "level index " + std::to_string(index) + " out of range for '" + name + "'");
        return spec.levels[static_cast<std::size_t>(index - 1)].label;
    }

    /// Maps a raw value onto the semantic level whose interval contains it.
    SemanticLevel map_value(const std::string& name, long long value) const {
        const AttributeSpec& spec = attribute(name);
        for (std::size_t i = 0; i < spec.levels.size(); ++i)
            if (value >= spec.levels[i].lo && value <= spec.levels[i].hi)
                return SemanticLevel{name, static_cast<int>(i + 1)};
        fail(ErrorCode::OutOfRange, "value " + std::to_string(value) + " outside the domain of '" + name +
                                        "' [0, " + std::to_string(spec.levels.back().hi) + "]");
    }

    /// Index arithmetic for aggregated demand: a + b on the level scale.
    /// Exceeding the top level is a capacity overflow, not a clamp.
    SemanticLevel add_levels(const SemanticLevel& a, const SemanticLevel& b) const {
        if (a.attribute != b.attribute)
            fail(ErrorCode::AttributeSetMismatch,
                 "cannot add levels of '" + a.attribute + "' and '" + b.attribute + "'");
        const AttributeSpec& spec = attribute(a.attribute);
        check_index(spec, a.index);
        check_index(spec, b.index);
        int sum = a.index + b.index;
        if (sum > static_cast<int>(spec.levels.size()))
            fail(ErrorCode::CapacityOverflow, "aggregated level " + std::to_string(sum) + " exceeds '" +
                                                  a.attribute + "' scale of " +
                                                  std::to_string(spec.levels.size()));
        return SemanticLevel{a.attribute, sum};
    }

    friend bool operator==(const SemanticTable& a, const SemanticTable& b) {
        return a.attributes_ == b.attributes_;
    }

  private:
    static void check_index(const AttributeSpec& spec, int index) {
        if (index < 1 || index > static_cast<int>(spec.levels.size()))
            fail(ErrorCode::OutOfRange,
                 "level index " + std::to_string(index) + " out of range for '" + spec.name + "'");
    }

    std::vector<AttributeSpec> attributes_;
};

/// True when both tables list the same attributes in the same order and, per
/// attribute, one level list is a prefix of the other. Composition across
/// tables requires this; the finer table then governs the result.
inline bool prefix_compatible(const SemanticTable& a, const SemanticTable& b) {
    if (a.attribute_count() != b.attribute_count()) return false;
    for (std::size_t i = 0; i < a.attribute_count(); ++i) {
        const AttributeSpec& sa = a.attribute_at(i);
        const AttributeSpec& sb = b.attribute_at(i);
        if (sa.name != sb.name) return false;
        const std::vector<SemanticInterval>& shorter = sa.levels.size() <= sb.levels.size() ? sa.levels : sb.levels;
        const std::vector<SemanticInterval>& longer = sa.levels.size() <= sb.levels.size() ? sb.levels : sa.levels;
        if (!std::equal(shorter.begin(), shorter.end(), longer.begin())) return false;
    }
    return true;
}

/// Union of two prefix-compatible tables: per attribute, the longer level
/// list wins. The inputs may be incomparable (each finer somewhere); the
/// result is the least table at least as fine as both.
inline SemanticTable finer_table(const SemanticTable& a, const SemanticTable& b) {
    std::vector<AttributeSpec> merged;
    merged.reserve(a.attribute_count());
    for (std::size_t i = 0; i < a.attribute_count(); ++i) {
        const AttributeSpec& sa = a.attribute_at(i);
        const AttributeSpec& sb = b.attribute_at(i);
        merged.push_back(sa.levels.size() >= sb.levels.size() ? sa : sb);
    }
    return SemanticTable(std::move(merged));
}

}  // namespace cpnet
