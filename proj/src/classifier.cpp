// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "likeness/error.hpp"
#include "likeness/kernels.hpp"

namespace lj {

void ClfConfig::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("classifier: lambda must be >= 0");
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw ValidationError("classifier: learning rate must be >= 0");
    if (batch_size == 0) throw ValidationError("classifier: batch size must be positive");
    if (max_epochs < 0 || patience < 1) throw ValidationError("classifier: bad epoch/patience settings");
}

ClfParams ClfParams::init(std::size_t dims, bool use_bias, std::uint64_t seed) {
    ClfParams p;
    p.dims = dims;
    p.weights.resize(2 * dims);
    std::mt19937_64 rng(seed ^ 0x636c665f696e6974ULL);
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(dims, 1)));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : p.weights) w = u(rng);
    if (use_bias) p.bias.assign(2, 0.0);
    return p;
}

std::vector<double> ClfParams::flatten() const {
    std::vector<double> flat(weights);
    flat.insert(flat.end(), bias.begin(), bias.end());
    return flat;
}

void ClfParams::unflatten(std::span<const double> flat) {
    if (flat.size() != weights.size() + bias.size()) {
        throw ValidationError("classifier: flat parameter size mismatch");
    }
    std::copy_n(flat.begin(), weights.size(), weights.begin());
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(weights.size()), flat.end(), bias.begin());
}

void ClfParams::validate() const {
    if (weights.size() != 2 * dims) throw ValidationError("classifier: W_F must be 2 x K");
    if (!bias.empty() && bias.size() != 2) throw ValidationError("classifier: bias must have 2 entries");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(weights.begin(), weights.end(), finite) ||
        !std::all_of(bias.begin(), bias.end(), finite)) {
        throw ValidationError("classifier: non-finite parameter");
    }
    if (standardizer.fitted()) {
        if (standardizer.mean.size() != dims || standardizer.std.size() != dims) {
            throw ValidationError("classifier: standardizer size mismatch");
        }
        for (double s : standardizer.std) {
            if (!(s > 0.0)) throw ValidationError("classifier: standardizer std must be > 0");
        }
    }
}

std::array<double, 2> clf_logits(std::span<const double> z, const ClfParams& p) {
    if (z.size() != p.dims) {
        throw ValidationError(fmt::format("clf_logits: z has {} entries, expected {}", z.size(), p.dims));
    }
    std::array<double, 2> l{kernels::dot(p.row(kHumanRow), z), kernels::dot(p.row(kMachineRow), z)};
    if (p.has_bias()) {
        l[0] += p.bias[0];
        l[1] += p.bias[1];
    }
    return l;
}

double sym_reg(std::span<const double> weights, std::size_t dims) {
    if (weights.size() != 2 * dims) throw ValidationError("sym_reg: W_F must be 2 x K");
    double ss = 0.0;
    for (std::size_t k = 0; k < dims; ++k) {
        const double s = weights[k] + weights[dims + k];
        ss += s * s;
    }
    return std::sqrt(ss);
}

namespace {

// -log softmax(l)_y for the binary case, as -log sigmoid of the signed margin.
double cross_entropy(double margin, Label y) {
    return y == Label::machine ? -log_sigmoid(margin) : -log_sigmoid(-margin);
}

} // namespace

double clf_loss(std::span<const ClfSample> batch, const ClfParams& p, double lambda) {
    double ce = 0.0;
    for (const auto& s : batch) {
        const auto l = clf_logits(s.z, p);
        ce += cross_entropy(l[kMachineRow] - l[kHumanRow], s.label);
    }
    if (!batch.empty()) ce /= static_cast<double>(batch.size());
    return ce + lambda * sym_reg(p);
}

ClfGradients clf_loss_grad(std::span<const ClfSample> batch, const ClfParams& p, double lambda) {
    const std::size_t K = p.dims;
    ClfGradients out;
    out.flat.assign(p.weights.size() + p.bias.size(), 0.0);
    double* gh = out.flat.data();
    double* gm = gh + K;
    for (const auto& s : batch) {
        const auto l = clf_logits(s.z, p);
        const double margin = l[kMachineRow] - l[kHumanRow];
        out.loss += cross_entropy(margin, s.label);
        // dCE/dl_machine = p_machine - y_machine, dCE/dl_human = its negative.
        const double r = sigmoid(margin) - (s.label == Label::machine ? 1.0 : 0.0);
        kernels::axpy(r, s.z, {gm, K});
        kernels::axpy(-r, s.z, {gh, K});
        if (p.has_bias()) {
            out.flat[2 * K] -= r;
            out.flat[2 * K + 1] += r;
        }
    }
    if (!batch.empty()) {
        const double inv = 1.0 / static_cast<double>(batch.size());
        out.loss *= inv;
        for (auto& g : out.flat) g *= inv;
    }
    const double reg = sym_reg(p);
    out.loss += lambda * reg;
    if (lambda > 0.0 && reg > 0.0) {
        for (std::size_t k = 0; k < K; ++k) {
            const double g = lambda * (p.weights[k] + p.weights[K + k]) / reg;
            gh[k] += g;
            gm[k] += g;
        }
    }
    return out;
}

Decision classify(std::span<const double> z, const ClfParams& p) {
    const auto l = clf_logits(z, p);
    const double margin = l[kMachineRow] - l[kHumanRow];
    return {margin > 0.0 ? Label::machine : Label::human, sigmoid(margin), margin};
}

double accuracy(std::span<const ClfSample> samples, const ClfParams& p) {
    if (samples.empty()) return 0.0;
    std::size_t hit = 0;
    for (const auto& s : samples) hit += classify(s.z, p).label == s.label ? 1 : 0;
    return static_cast<double>(hit) / static_cast<double>(samples.size());
}

ClfTrainResult train_clf(std::span<const ClfSample> train, std::span<const ClfSample> val,
                         const ClfConfig& cfg) {
    cfg.validate();
    if (train.size() < 2) throw ValidationError("classifier: need at least two training samples");
    const std::size_t K = train.front().z.size();
    bool has_human = false;
    bool has_machine = false;
    for (const auto& s : train) {
        if (s.z.size() != K) throw ValidationError("classifier: ragged latent scores");
        (s.label == Label::human ? has_human : has_machine) = true;
    }
    if (!has_human || !has_machine) {
        throw ValidationError("classifier: training set contains a single class");
    }
    // Selection falls back to the training set when no validation data exists.
    const auto select_on = val.empty() ? train : val;

    ClfParams params = ClfParams::init(K, cfg.use_bias, cfg.seed);
    std::vector<std::vector<double>> train_z;
    train_z.reserve(train.size());
    for (const auto& s : train) train_z.emplace_back(s.z.begin(), s.z.end());
    params.standardizer = fit_standardizer(train_z);

    ClfTrainResult result;
    result.params = params;
    result.best_val_accuracy = accuracy(select_on, params);
    result.best_val_loss = clf_loss(select_on, params, cfg.lambda);
    result.log.push_back({0, clf_loss(train, params, cfg.lambda), result.best_val_loss,
                          result.best_val_accuracy});

    std::vector<double> flat = params.flatten();
    OptState opt = OptState::fresh(flat.size());
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<ClfSample> batch;
    int bad_epochs = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);
            const auto g = clf_loss_grad(batch, params, cfg.lambda);
            if (!std::isfinite(g.loss)) {
                throw RuntimeFailure(fmt::format("classifier: non-finite loss in epoch {}", epoch));
            }
            epoch_loss += g.loss * static_cast<double>(end - start);
            adam_step(flat, g.flat, opt, cfg.lr);
            params.unflatten(flat);
        }
        const double acc = accuracy(select_on, params);
        const double loss = clf_loss(select_on, params, cfg.lambda);
        result.log.push_back({epoch, epoch_loss / static_cast<double>(order.size()), loss, acc});
        spdlog::debug("classifier epoch {}: val acc {:.4f} loss {:.6f}", epoch, acc, loss);
        if (acc > result.best_val_accuracy ||
            (acc == result.best_val_accuracy && loss < result.best_val_loss)) {
            result.best_val_accuracy = acc;
            result.best_val_loss = loss;
            result.best_epoch = epoch;
            result.params = params;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.patience) {
            break;
        }
    }
    spdlog::info("classifier: best epoch {}, val accuracy {:.4f}", result.best_epoch,
                 result.best_val_accuracy);
    return result;
}

} // namespace lj
