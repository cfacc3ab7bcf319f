// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "likeness/classifier.hpp"
#include "likeness/registry.hpp"

namespace lj {

enum class Evidence { machine, human };

/// Which weight vector multiplies the standardized scores. The default is
/// the decision direction W_machine - W_human; machine_row uses the raw
/// machine row for comparison.
enum class WeightSource { difference, machine_row };

struct AttributionEntry {
    int dim = 0;
    double contribution = 0.0;
    Evidence evidence = Evidence::human;
};

struct AttributionReport {
    std::string id;
    std::vector<double> contributions;
    std::vector<AttributionEntry> top;
    Label decision = Label::human;
    double prob_machine = 0.5;
    double margin = 0.0;
};

inline constexpr std::size_t kDefaultTopK = 8;

std::vector<double> attribution_weights(const ClfParams& p, WeightSource source);

/// c_k = standardize(z)_k * w_k. Throws ValidationError if the standardizer
/// was never fitted.
std::vector<double> contributions(std::span<const double> z, const ClfParams& p,
                                  WeightSource source = WeightSource::difference);

/// Top entries by |c_k| descending, ties by dim id ascending.
AttributionReport top_k_report(std::span<const double> c, std::size_t k = kDefaultTopK);

/// Full report for one dialogue: contributions, ranking and the decision.
AttributionReport explain(std::string id, std::span<const double> z, const ClfParams& p,
                          std::size_t k = kDefaultTopK,
                          WeightSource source = WeightSource::difference);

nlohmann::ordered_json to_json(const AttributionReport& r, const DimensionRegistry& reg);
std::string format_table(const AttributionReport& r, const DimensionRegistry& reg);

} // namespace lj
