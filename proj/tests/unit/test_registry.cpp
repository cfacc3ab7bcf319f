// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <array>
#include <set>
#include <string>

#include "likeness/error.hpp"
#include "likeness/registry.hpp"

using namespace lj;

TEST_CASE("standard registry holds the 18 dimensions in order") {
    const auto& reg = DimensionRegistry::standard();
    REQUIRE(reg.size() == kNumDimensions);
    const std::array<const char*, 18> codes{"MC", "LC", "PA", "CS", "LI", "UF", "MM", "RT", "IT",
                                            "ST", "AV", "MN", "PI", "AC", "SB", "WE", "TS", "AE"};
    std::set<std::string> seen;
    for (std::size_t k = 0; k < codes.size(); ++k) {
        CHECK(reg.at(k).id == static_cast<int>(k));
        CHECK(reg.at(k).code == codes[k]);
        CHECK(reg.find(codes[k]) == static_cast<int>(k));
        CHECK_FALSE(reg.at(k).name.empty());
        seen.insert(std::string(reg.at(k).code));
    }
    CHECK(seen.size() == 18);
    CHECK_FALSE(reg.find("XX").has_value());
}

TEST_CASE("category assignment follows the five-way taxonomy") {
    const auto& reg = DimensionRegistry::standard();
    CHECK(reg.at(0).category == Category::SemanticPragmatic);
    CHECK(reg.at(6).category == Category::SemanticPragmatic);
    CHECK(reg.at(7).category == Category::NonPhysiologicalParalinguistic);
    CHECK(reg.at(10).category == Category::NonPhysiologicalParalinguistic);
    CHECK(reg.at(11).category == Category::PhysiologicalParalinguistic);
    CHECK(reg.at(13).category == Category::PhysiologicalParalinguistic);
    CHECK(reg.at(14).category == Category::MechanicalPersona);
    CHECK(reg.at(15).category == Category::MechanicalPersona);
    CHECK(reg.at(16).category == Category::EmotionalExpression);
    CHECK(reg.at(17).category == Category::EmotionalExpression);
    CHECK(roman(Category::EmotionalExpression) == "V");
}

TEST_CASE("registry rejects gaps and duplicate codes") {
    const std::array<Dimension, 2> gap{{{0, "A", "a", Category::SemanticPragmatic},
                                        {2, "B", "b", Category::SemanticPragmatic}}};
    CHECK_THROWS_AS(DimensionRegistry(gap), ValidationError);
    const std::array<Dimension, 2> dup{{{0, "A", "a", Category::SemanticPragmatic},
                                        {1, "A", "b", Category::SemanticPragmatic}}};
    CHECK_THROWS_AS(DimensionRegistry(dup), ValidationError);
    CHECK_THROWS_AS(DimensionRegistry::standard().at(18), ValidationError);
}
