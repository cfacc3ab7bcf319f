// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "likeness/classifier.hpp"
#include "likeness/odl.hpp"
#include "likeness/search.hpp"
#include "likeness/synth.hpp"

namespace lj {

/// Everything a CLI run needs. Loaded from a JSON config file, then
/// individual command-line flags override fields.
struct RunConfig {
    std::filesystem::path embeddings;
    std::filesystem::path labels;
    std::filesystem::path checkpoint;
    std::filesystem::path out;
    std::uint64_t seed = 0;
    OdlConfig odl;
    ClfConfig clf;
    SynthConfig synth;
    SearchSpace search;

    /// Pushes the run seed into the per-stage configs.
    void propagate_seed();
};

/// Unknown keys are rejected so typos do not pass silently.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const RunConfig& c);

} // namespace lj
