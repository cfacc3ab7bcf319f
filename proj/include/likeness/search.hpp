// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "likeness/classifier.hpp"
#include "likeness/datamodel.hpp"
#include "likeness/odl.hpp"

namespace lj {

enum class SearchStrategy { grid, uniform_random };

struct SearchSpace {
    std::vector<double> odl_lr{1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<std::size_t> odl_batch{16, 32, 64, 128};
    double scale_min = 1.0;
    double scale_max = 10.0;
    double scale_step = 0.01;
    std::vector<double> dropout{0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> clf_lr{1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<std::size_t> clf_batch{32, 64, 128, 256};
    std::size_t budget = 8;
    SearchStrategy strategy = SearchStrategy::uniform_random;
    std::uint64_t seed = 0;

    void validate() const;
    std::vector<double> scales() const;
    std::size_t grid_size() const;
};

struct TrialConfig {
    double odl_lr = 0.0;
    std::size_t odl_batch = 0;
    double scale = 0.0;
    double dropout = 0.0;
    double clf_lr = 0.0;
    std::size_t clf_batch = 0;
};

struct Trial {
    std::size_t index = 0;
    TrialConfig config;
    double val_accuracy = 0.0;
    double val_loss = 0.0;
    double wall_seconds = 0.0;
};

struct SearchResult {
    std::vector<Trial> ranked;
    bool budget_clamped = false;
};

/// Called once per finished trial, in trial order.
using TrialSink = std::function<void(const Trial&)>;

/// Trains ODL then classifier for each sampled configuration and ranks by
/// validation accuracy, ties by lower validation loss then trial index.
/// base_odl/base_clf supply everything the space does not vary (epochs,
/// patience, lambda, readout, seed).
SearchResult run_search(const SearchSpace& space, const Dataset& data, const OdlConfig& base_odl,
                        const ClfConfig& base_clf, const TrialSink& sink = {});

/// Trial configurations in the order run_search visits them.
std::vector<TrialConfig> sample_trials(const SearchSpace& space, bool* clamped = nullptr);

nlohmann::ordered_json to_json(const Trial& t);

struct SensitivityRow {
    std::string parameter;
    double value = 0.0;
    double mean = 0.0;
    double sem = 0.0;
    std::size_t n = 0;
};

/// Mean and standard error of validation accuracy per hyperparameter value.
std::vector<SensitivityRow> sensitivity(const std::vector<Trial>& trials);
std::string format_sensitivity(const std::vector<SensitivityRow>& rows);

} // namespace lj
