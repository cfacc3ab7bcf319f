// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Ordinal discretization layer: an affine projection from the dialogue
// representation to K latent scores, each turned into a distribution over r
// ordered levels by a cumulative logit link with cut-points generated from a
// single positive scale per dimension.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "likeness/datamodel.hpp"
#include "likeness/readout.hpp"

namespace lj {

struct OdlConfig {
    std::size_t dims = 18;
    int levels = kDefaultLevels;
    double dropout = 0.3;
    double lr = 1e-5;
    std::size_t batch_size = 64;
    double scale_init = 2.1;
    int max_epochs = 200;
    int patience = 10;
    std::uint64_t seed = 0;
    ReadoutMode readout = ReadoutMode::fused;

    void validate() const;
};

struct OdlParams {
    std::size_t dims = 0;   // K
    std::size_t input = 0;  // d
    int levels = kDefaultLevels;
    std::vector<double> weights;    // K x d, row-major
    std::vector<double> bias;       // K
    std::vector<double> scale_raw;  // K, s_k = exp(scale_raw_k)
    Readout readout;

    /// W = U(-1/sqrt(d), 1/sqrt(d)) from the seed, b = 0, s_k = scale_init.
    static OdlParams init(std::size_t dims, std::size_t input, int levels, double scale_init,
                          ReadoutMode mode, std::uint64_t seed);

    double scale(std::size_t k) const;
    std::span<const double> row(std::size_t k) const {
        return {weights.data() + k * input, input};
    }

    /// Flat layout: weights, bias, scale_raw, w_first, w_last.
    std::size_t parameter_count() const { return dims * input + 2 * dims + 2; }
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

    void validate() const;
};

/// C_i = (i - r + 2) / (2 (r - 2)) * s for i = 1..r-1. Throws ValidationError
/// for r < 3 or s <= 0.
std::vector<double> cutpoints(double scale, int levels);

/// Coefficient of s in cut-point i (1-based).
double cutpoint_coefficient(int i, int levels);

struct OrdinalDistribution {
    std::size_t dims = 0;
    int levels = 0;
    std::vector<double> cat_probs;  // K x r
    std::vector<double> cum_probs;  // K x (r-1)
    std::vector<double> z;

    std::span<const double> categories(std::size_t k) const {
        return {cat_probs.data() + k * levels, static_cast<std::size_t>(levels)};
    }
    std::span<const double> cumulative(std::size_t k) const {
        return {cum_probs.data() + k * (levels - 1), static_cast<std::size_t>(levels - 1)};
    }
};

/// z = W (h * dropout_scale) + b. dropout_scale is empty at inference, or a
/// d-vector holding mask/keep_prob during training.
std::vector<double> project(std::span<const double> h, const OdlParams& p,
                            std::span<const double> dropout_scale = {});

/// Category probabilities for one latent score, written into out[0..r).
void category_probs(double z, double scale, int levels, std::span<double> out);

/// log P(Y = level | z, s) computed without differencing, clamped at
/// log(1e-300). level is 1-based.
double category_log_prob(double z, double scale, int levels, int level);

OrdinalDistribution distribution(std::span<const double> z, std::span<const double> scales,
                                 int levels);
OrdinalDistribution distribution(std::span<const double> z, const OdlParams& p);

/// Argmax level per dimension (1-based); ties resolve to the lower level.
std::vector<int> predict_levels(const OrdinalDistribution& dist);

/// One rated dialogue as seen by the ordinal loss.
struct OdlSample {
    std::span<const double> first_mean;
    std::span<const double> last;
    std::span<const int> ratings;
};

/// Mean over samples of the summed per-dimension negative log-likelihood,
/// on the inference path (no dropout).
double nll(std::span<const OdlSample> batch, const OdlParams& p);

struct OdlGradients {
    double loss = 0.0;
    std::vector<double> flat;  // same layout as OdlParams::flatten()
};

/// Loss and analytic gradient. dropout_scales, when given, holds one
/// d-vector per sample.
OdlGradients nll_grad(std::span<const OdlSample> batch, const OdlParams& p,
                      std::span<const std::vector<double>> dropout_scales = {});

struct OdlEpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct OdlTrainResult {
    OdlParams params;
    std::vector<OdlEpochLog> log;
    int best_epoch = 0;
    double best_val_loss = 0.0;
};

/// Adam on the ordinal NLL over the rated train split, early-stopped on the
/// rated val split. Returns the best-on-validation parameters.
OdlTrainResult train_odl(const Dataset& data, const OdlConfig& cfg);

/// Inference-path latent scores for one embedding pair.
std::vector<double> latent_scores(const EmbeddingPair& e, const OdlParams& p);

} // namespace lj
