// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace lj {

/// Taxonomy category a human-likeness dimension belongs to.
enum class Category {
    SemanticPragmatic,          // I
    NonPhysiologicalParalinguistic, // II
    PhysiologicalParalinguistic,    // III
    MechanicalPersona,          // IV
    EmotionalExpression,        // V
};

std::string_view roman(Category c);

struct Dimension {
    int id;
    std::string_view code;
    std::string_view name;
    Category category;
};

inline constexpr std::size_t kNumDimensions = 18;

/// Ordered list of rated dimensions. The standard registry holds the 18
/// dimensions in the canonical order used by ratings arrays and model
/// outputs, so index k of any K-vector is dimension id k.
class DimensionRegistry {
public:
    /// Validates ids are 0..n-1 without gaps and codes are unique.
    /// Throws ValidationError otherwise.
    explicit DimensionRegistry(std::span<const Dimension> entries);

    static const DimensionRegistry& standard();

    std::span<const Dimension> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const Dimension& at(std::size_t id) const;
    std::optional<int> find(std::string_view code) const;

private:
    std::span<const Dimension> entries_;
};

} // namespace lj
