// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/registry.hpp"

#include <array>
#include <set>
#include <string>

#include <fmt/format.h>

#include "likeness/error.hpp"

namespace lj {

namespace {

using C = Category;

constexpr std::array<Dimension, kNumDimensions> kStandard{{
    {0, "MC", "Memory Consistency", C::SemanticPragmatic},
    {1, "LC", "Logical Coherence", C::SemanticPragmatic},
    {2, "PA", "Pronunciation Accuracy", C::SemanticPragmatic},
    {3, "CS", "Code-switching", C::SemanticPragmatic},
    {4, "LI", "Linguistic Imprecision", C::SemanticPragmatic},
    {5, "UF", "Use of Fillers", C::SemanticPragmatic},
    {6, "MM", "Metaphor & Implied Meaning", C::SemanticPragmatic},
    {7, "RT", "Rhythm", C::NonPhysiologicalParalinguistic},
    {8, "IT", "Intonation", C::NonPhysiologicalParalinguistic},
    {9, "ST", "Stress", C::NonPhysiologicalParalinguistic},
    {10, "AV", "Auxiliary Vocalizations", C::NonPhysiologicalParalinguistic},
    {11, "MN", "Micro-physiological Noise", C::PhysiologicalParalinguistic},
    {12, "PI", "Pronunciation Instability", C::PhysiologicalParalinguistic},
    {13, "AC", "Accent", C::PhysiologicalParalinguistic},
    {14, "SB", "Sycophant Behavior", C::MechanicalPersona},
    {15, "WE", "Written-style Expression", C::MechanicalPersona},
    {16, "TS", "Textual Sentiment", C::EmotionalExpression},
    {17, "AE", "Acoustic Emotion", C::EmotionalExpression},
}};

} // namespace

std::string_view roman(Category c) {
    switch (c) {
    case C::SemanticPragmatic: return "I";
    case C::NonPhysiologicalParalinguistic: return "II";
    case C::PhysiologicalParalinguistic: return "III";
    case C::MechanicalPersona: return "IV";
    case C::EmotionalExpression: return "V";
    }
    return "?";
}

DimensionRegistry::DimensionRegistry(std::span<const Dimension> entries) : entries_(entries) {
    std::set<std::string_view> codes;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].id != static_cast<int>(i)) {
            throw ValidationError(fmt::format("dimension registry: entry {} has id {}", i,
                                              entries_[i].id));
        }
        if (!codes.insert(entries_[i].code).second) {
            throw ValidationError(
                fmt::format("dimension registry: duplicate code '{}'", entries_[i].code));
        }
    }
}

const DimensionRegistry& DimensionRegistry::standard() {
    static const DimensionRegistry reg{kStandard};
    return reg;
}

const Dimension& DimensionRegistry::at(std::size_t id) const {
    if (id >= entries_.size()) {
        throw ValidationError(fmt::format("dimension id {} out of range", id));
    }
    return entries_[id];
}

std::optional<int> DimensionRegistry::find(std::string_view code) const {
    for (const auto& d : entries_) {
        if (d.code == code) return d.id;
    }
    return std::nullopt;
}

} // namespace lj
