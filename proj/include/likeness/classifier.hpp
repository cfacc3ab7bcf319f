// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "likeness/datamodel.hpp"
#include "likeness/numerics.hpp"

namespace lj {

inline constexpr std::size_t kHumanRow = 0;
inline constexpr std::size_t kMachineRow = 1;

struct ClfConfig {
    double lambda = 0.1;
    double lr = 1e-3;
    std::size_t batch_size = 128;
    int max_epochs = 200;
    int patience = 20;
    std::uint64_t seed = 0;
    bool use_bias = false;

    void validate() const;
};

/// Final linear layer W_F (2 x K, row 0 human, row 1 machine) plus the
/// training-set statistics of z used by attribution.
struct ClfParams {
    std::size_t dims = 0;
    std::vector<double> weights;  // 2 x K, row-major
    std::vector<double> bias;     // empty, or 2 entries when enabled
    Standardizer standardizer;

    static ClfParams init(std::size_t dims, bool use_bias, std::uint64_t seed);

    std::span<const double> row(std::size_t r) const { return {weights.data() + r * dims, dims}; }
    bool has_bias() const { return !bias.empty(); }

    /// Flat layout: weights then bias (if any).
    std::vector<double> flatten() const;
    void unflatten(std::span<const double> flat);

    void validate() const;
};

/// W_F z (+ bias when enabled).
std::array<double, 2> clf_logits(std::span<const double> z, const ClfParams& p);

/// ||W_1 + W_2||_2 over the two class rows.
double sym_reg(std::span<const double> weights, std::size_t dims);
inline double sym_reg(const ClfParams& p) { return sym_reg(p.weights, p.dims); }

struct ClfSample {
    std::span<const double> z;
    Label label;
};

/// Mean cross-entropy over the batch plus lambda * sym_reg.
double clf_loss(std::span<const ClfSample> batch, const ClfParams& p, double lambda);

struct ClfGradients {
    double loss = 0.0;
    std::vector<double> flat;  // same layout as ClfParams::flatten()
};

ClfGradients clf_loss_grad(std::span<const ClfSample> batch, const ClfParams& p, double lambda);

struct Decision {
    Label label;
    double prob_machine;
    double margin;  // l_machine - l_human
};

/// Margin exactly zero resolves to human.
Decision classify(std::span<const double> z, const ClfParams& p);

struct ClfEpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct ClfTrainResult {
    ClfParams params;
    std::vector<ClfEpochLog> log;
    int best_epoch = 0;
    double best_val_accuracy = 0.0;
    double best_val_loss = 0.0;
};

/// Trains W_F on frozen latent scores. Selection is by validation accuracy,
/// ties going to lower validation loss. The standardizer is fitted on the
/// training z. Throws ValidationError if training holds a single class.
ClfTrainResult train_clf(std::span<const ClfSample> train, std::span<const ClfSample> val,
                         const ClfConfig& cfg);

double accuracy(std::span<const ClfSample> samples, const ClfParams& p);

} // namespace lj
