// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "likeness/datamodel.hpp"

namespace lj {

enum class ReadoutMode { mean, last, fused };

std::string_view to_string(ReadoutMode m);
ReadoutMode parse_readout(std::string_view s);

/// Learnable gate over the two embedding sources. The mixing coefficients
/// are softmax(w_first, w_last), so the fused vector is always a convex
/// combination.
struct FusionParams {
    double w_first = 0.0;
    double w_last = 0.0;

    /// (alpha_first, alpha_last), positive and summing to one.
    std::pair<double, double> coefficients() const;
};

/// Fusion weights only take part when mode == fused.
struct Readout {
    ReadoutMode mode = ReadoutMode::fused;
    FusionParams fusion;
};

std::vector<double> readout(std::span<const double> first_mean, std::span<const double> last,
                            const Readout& r);

inline std::vector<double> readout(const EmbeddingPair& e, const Readout& r) {
    return readout(e.first_mean, e.last, r);
}

} // namespace lj
