// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "likeness/datamodel.hpp"
#include "likeness/registry.hpp"

namespace lj {

struct SourceAccuracy {
    std::map<Source, double> by_source;  // sources with no samples are absent
    std::map<Source, std::size_t> counts;
    double overall = 0.0;
    std::size_t total = 0;
};

/// Overall accuracy is over the union, not the mean of the per-source values.
SourceAccuracy binary_accuracy(std::span<const Label> preds, std::span<const Label> labels,
                               std::span<const Source> sources);

/// Probability that a machine example scores above a human one, ties
/// counted half. Throws ValidationError unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

struct LevelAccuracy {
    double exact = 0.0;
    double grouped = 0.0;
    double nearby = 0.0;
};

struct FineGrainedAccuracy {
    std::vector<LevelAccuracy> per_dim;
    LevelAccuracy overall;
    std::size_t samples = 0;
};

/// Bucket of a level: 0 = machine-like (below the middle), 1 = the middle
/// level (odd r only), 2 = human-like. For r = 5 the buckets are {1,2},{3},{4,5}.
int level_group(int level, int levels = kDefaultLevels);

/// pred and truth hold one K-vector of levels per sample.
FineGrainedAccuracy fine_grained_accuracy(std::span<const std::vector<int>> pred,
                                          std::span<const std::vector<int>> truth,
                                          int levels = kDefaultLevels);

struct Judgment {
    std::string system;
    bool judged_human = false;
};

struct SuccessRate {
    double rate = 0.0;
    std::size_t trials = 0;
    bool above_chance = false;  // rate > 0.5
};

std::map<std::string, SuccessRate> success_rate(std::span<const Judgment> judgments);

struct TrendBin {
    std::size_t n = 0;
    std::size_t y = 0;
    double score = 0.0;
};

struct TrendResult {
    double z = 0.0;
    double p = 1.0;
};

/// Cochran-Armitage test for a linear trend in proportions, two-sided
/// normal p-value without continuity correction. Throws ValidationError for
/// fewer than two bins, empty input, or a pooled proportion of 0 or 1.
TrendResult cochran_armitage(std::span<const TrendBin> bins);

struct TrendTest {
    std::string group;
    std::vector<TrendBin> bins;
    TrendResult result;
};

struct EvalReport {
    std::string split;
    SourceAccuracy accuracy;
    std::optional<double> roc_auc;
    std::optional<FineGrainedAccuracy> fine_grained;
    std::map<std::string, SuccessRate> success_rate_by_system;
    std::vector<TrendTest> trend_tests;
};

nlohmann::ordered_json to_json(const EvalReport& r, const DimensionRegistry& reg);
/// Aligned text tables: per-source accuracy, fine-grained per dimension,
/// success rates and trend tests.
std::string format_tables(const EvalReport& r, const DimensionRegistry& reg);

} // namespace lj
