// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic data with a planted judge. A latent class c = +-1 draws
// h = spread * (c * class_margin / 2 * u + eps), eps ~ N(0, I), where u is
// chosen so the planted classifier margin v . (W h) moves one unit per unit
// of u and has std `spread` within a class. The two embedding sources are
// h -+ delta, so their equal mix recovers h. Ratings are sampled from the
// planted ordinal layer; labels are the planted classifier's decision on its
// margin plus N(0, noise_std^2).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "likeness/classifier.hpp"
#include "likeness/datamodel.hpp"
#include "likeness/odl.hpp"

namespace lj {

struct SynthConfig {
    std::size_t d = 16;
    std::size_t dims = 18;
    int levels = kDefaultLevels;
    std::size_t n_train = 2000;
    std::size_t n_val = 500;
    std::size_t n_test = 500;
    double spread = 1.0;        // per-coordinate std of h around its class mean
    double class_margin = 4.0;  // class mean separation, in planted-margin std units
    double noise_std = 0.5;
    double source_noise = 0.5;  // std of delta between the two sources
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthTruth {
    OdlParams odl;
    ClfParams clf;
    double bayes_level_accuracy = 0.0;
    double bayes_binary_accuracy = 0.0;
};

struct SynthData {
    std::vector<EmbeddingPair> embeddings;
    std::vector<LabeledExample> labels;
    SynthTruth truth;
};

SynthData generate(const SynthConfig& cfg);

/// Inverse-CDF draw of a 1-based level from one row of category probabilities.
int sample_level(std::span<const double> cat_probs, std::mt19937_64& rng);

/// Writes embeddings.jsonl, labels.jsonl and truth.json under dir. Ratings
/// arrays must hold kNumDimensions entries.
void write_synth(const std::filesystem::path& dir, const SynthData& data);

} // namespace lj
