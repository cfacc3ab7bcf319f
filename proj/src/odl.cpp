// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/odl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "likeness/error.hpp"
#include "likeness/kernels.hpp"
#include "likeness/numerics.hpp"

namespace lj {

namespace {

constexpr double kProbFloor = 1e-300;
const double kLogProbFloor = std::log(kProbFloor);

// Spacing between consecutive cut-points per unit of scale.
double gap_coefficient(int levels) { return 1.0 / (2.0 * (levels - 2)); }

struct LevelTerms {
    double log_prob;
    double dlogp_dz;
    double dlogp_ds;
};

// log P(Y = y) and its partial derivatives in z and s. With a = C_y - z and
// b = C_{y-1} - z, a middle category has
//   log P = log s(a) + log s(-b) + log(1 - exp(-(a - b)))
// which avoids differencing two nearly equal cumulative probabilities.
LevelTerms level_terms(double z, double scale, int levels, int y) {
    LevelTerms t{0.0, 0.0, 0.0};
    if (y < levels) {
        const double coef = cutpoint_coefficient(y, levels);
        const double a = coef * scale - z;
        t.log_prob += log_sigmoid(a);
        const double sa = sigmoid(-a);
        t.dlogp_dz -= sa;
        t.dlogp_ds += sa * coef;
    }
    if (y > 1) {
        const double coef = cutpoint_coefficient(y - 1, levels);
        const double b = coef * scale - z;
        t.log_prob += log_sigmoid(-b);
        const double sb = sigmoid(b);
        t.dlogp_dz += sb;
        t.dlogp_ds -= sb * coef;
    }
    if (y > 1 && y < levels) {
        const double g = gap_coefficient(levels);
        t.log_prob += std::log(-std::expm1(-g * scale));
        t.dlogp_ds += g / std::expm1(g * scale);
    }
    if (t.log_prob < kLogProbFloor) {
        t = {kLogProbFloor, 0.0, 0.0};
    }
    return t;
}

void check_level(int level, int levels) {
    if (level < 1 || level > levels) {
        throw ValidationError(fmt::format("level {} outside [1, {}]", level, levels));
    }
}

} // namespace

void OdlConfig::validate() const {
    check_levels(levels);
    if (dims == 0) throw ValidationError("odl: dimension count must be positive");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("odl: dropout must be in [0, 1)");
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw ValidationError("odl: learning rate must be >= 0");
    if (batch_size == 0) throw ValidationError("odl: batch size must be positive");
    if (!(scale_init > 0.0) || !std::isfinite(scale_init)) {
        throw ValidationError("odl: scale_init must be > 0");
    }
    if (max_epochs < 0 || patience < 1) throw ValidationError("odl: bad epoch/patience settings");
}

OdlParams OdlParams::init(std::size_t dims, std::size_t input, int levels, double scale_init,
                          ReadoutMode mode, std::uint64_t seed) {
    check_levels(levels);
    if (!(scale_init > 0.0)) throw ValidationError("odl: scale_init must be > 0");
    OdlParams p;
    p.dims = dims;
    p.input = input;
    p.levels = levels;
    p.weights.resize(dims * input);
    std::mt19937_64 rng(seed ^ 0x6f646c5f696e6974ULL);
    const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(input, 1)));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (auto& w : p.weights) w = u(rng);
    p.bias.assign(dims, 0.0);
    p.scale_raw.assign(dims, std::log(scale_init));
    p.readout.mode = mode;
    return p;
}

double OdlParams::scale(std::size_t k) const { return std::exp(scale_raw[k]); }

std::vector<double> OdlParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), weights.begin(), weights.end());
    flat.insert(flat.end(), bias.begin(), bias.end());
    flat.insert(flat.end(), scale_raw.begin(), scale_raw.end());
    flat.push_back(readout.fusion.w_first);
    flat.push_back(readout.fusion.w_last);
    return flat;
}

void OdlParams::unflatten(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw ValidationError("odl: flat parameter size mismatch");
    auto it = flat.begin();
    std::copy_n(it, weights.size(), weights.begin());
    it += static_cast<std::ptrdiff_t>(weights.size());
    std::copy_n(it, dims, bias.begin());
    it += static_cast<std::ptrdiff_t>(dims);
    std::copy_n(it, dims, scale_raw.begin());
    it += static_cast<std::ptrdiff_t>(dims);
    readout.fusion.w_first = *it++;
    readout.fusion.w_last = *it;
}

void OdlParams::validate() const {
    check_levels(levels);
    if (weights.size() != dims * input || bias.size() != dims || scale_raw.size() != dims) {
        throw ValidationError("odl: parameter shapes inconsistent with K and d");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(weights.begin(), weights.end(), finite) ||
        !std::all_of(bias.begin(), bias.end(), finite) ||
        !std::all_of(scale_raw.begin(), scale_raw.end(), finite) ||
        !finite(readout.fusion.w_first) || !finite(readout.fusion.w_last)) {
        throw ValidationError("odl: non-finite parameter");
    }
}

double cutpoint_coefficient(int i, int levels) {
    return static_cast<double>(i - levels + 2) / (2.0 * (levels - 2));
}

std::vector<double> cutpoints(double scale, int levels) {
    check_levels(levels);
    if (!(scale > 0.0)) throw ValidationError("cutpoints: scale must be > 0");
    std::vector<double> c(static_cast<std::size_t>(levels - 1));
    for (int i = 1; i < levels; ++i) c[i - 1] = cutpoint_coefficient(i, levels) * scale;
    return c;
}

std::vector<double> project(std::span<const double> h, const OdlParams& p,
                            std::span<const double> dropout_scale) {
    if (h.size() != p.input) {
        throw ValidationError(fmt::format("project: input has {} entries, expected {}", h.size(),
                                          p.input));
    }
    std::vector<double> masked;
    if (!dropout_scale.empty()) {
        if (dropout_scale.size() != h.size()) throw ValidationError("project: dropout mask size");
        masked.resize(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) masked[i] = h[i] * dropout_scale[i];
        h = masked;
    }
    std::vector<double> z(p.dims);
    for (std::size_t k = 0; k < p.dims; ++k) z[k] = kernels::dot(p.row(k), h) + p.bias[k];
    return z;
}

void category_probs(double z, double scale, int levels, std::span<double> out) {
    const auto cuts = cutpoints(scale, levels);
    out[0] = sigmoid(cuts[0] - z);
    for (int i = 1; i < levels - 1; ++i) {
        const double a = cuts[i] - z;
        const double b = cuts[i - 1] - z;
        // s(a) - s(b) = s(a) s(-b) (1 - e^{b - a})
        out[i] = sigmoid(a) * sigmoid(-b) * -std::expm1(b - a);
    }
    out[levels - 1] = sigmoid(z - cuts[levels - 2]);
}

double category_log_prob(double z, double scale, int levels, int level) {
    check_levels(levels);
    check_level(level, levels);
    return level_terms(z, scale, levels, level).log_prob;
}

OrdinalDistribution distribution(std::span<const double> z, std::span<const double> scales,
                                 int levels) {
    check_levels(levels);
    if (z.size() != scales.size()) throw ValidationError("distribution: z and scales differ");
    OrdinalDistribution d;
    d.dims = z.size();
    d.levels = levels;
    d.z.assign(z.begin(), z.end());
    d.cat_probs.resize(d.dims * levels);
    d.cum_probs.resize(d.dims * (levels - 1));
    for (std::size_t k = 0; k < d.dims; ++k) {
        category_probs(z[k], scales[k], levels, {d.cat_probs.data() + k * levels,
                                                 static_cast<std::size_t>(levels)});
        const auto cuts = cutpoints(scales[k], levels);
        for (int i = 0; i < levels - 1; ++i) d.cum_probs[k * (levels - 1) + i] = sigmoid(cuts[i] - z[k]);
    }
    return d;
}

OrdinalDistribution distribution(std::span<const double> z, const OdlParams& p) {
    std::vector<double> scales(p.dims);
    for (std::size_t k = 0; k < p.dims; ++k) scales[k] = p.scale(k);
    return distribution(z, scales, p.levels);
}

std::vector<int> predict_levels(const OrdinalDistribution& dist) {
    std::vector<int> out(dist.dims);
    for (std::size_t k = 0; k < dist.dims; ++k) {
        auto row = dist.categories(k);
        // max_element returns the first maximum, i.e. the lower level on ties.
        out[k] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()) + 1;
    }
    return out;
}

std::vector<double> latent_scores(const EmbeddingPair& e, const OdlParams& p) {
    return project(readout(e, p.readout), p);
}

double nll(std::span<const OdlSample> batch, const OdlParams& p) {
    if (batch.empty()) return 0.0;
    double total = 0.0;
    for (const auto& s : batch) {
        if (s.ratings.size() != p.dims) throw ValidationError("nll: sample lacks ratings");
        const auto z = project(readout(s.first_mean, s.last, p.readout), p);
        for (std::size_t k = 0; k < p.dims; ++k) {
            check_level(s.ratings[k], p.levels);
            total -= level_terms(z[k], p.scale(k), p.levels, s.ratings[k]).log_prob;
        }
    }
    return total / static_cast<double>(batch.size());
}

OdlGradients nll_grad(std::span<const OdlSample> batch, const OdlParams& p,
                      std::span<const std::vector<double>> dropout_scales) {
    if (!dropout_scales.empty() && dropout_scales.size() != batch.size()) {
        throw ValidationError("nll_grad: one dropout mask per sample required");
    }
    const std::size_t K = p.dims;
    const std::size_t d = p.input;
    OdlGradients out;
    out.flat.assign(p.parameter_count(), 0.0);
    if (batch.empty()) return out;

    double* gw = out.flat.data();
    double* gb = gw + K * d;
    double* gs = gb + K;
    double* gfuse = gs + K;

    std::vector<double> scales(K);
    for (std::size_t k = 0; k < K; ++k) scales[k] = p.scale(k);
    const bool fused = p.readout.mode == ReadoutMode::fused;
    const auto [a1, a2] = p.readout.fusion.coefficients();

    std::vector<double> h_in(d);
    std::vector<double> dz(K);
    std::vector<double> dh(d);
    for (std::size_t n = 0; n < batch.size(); ++n) {
        const auto& s = batch[n];
        if (s.ratings.size() != K) throw ValidationError("nll_grad: sample lacks ratings");
        const auto h = readout(s.first_mean, s.last, p.readout);
        const std::vector<double>* mask = dropout_scales.empty() ? nullptr : &dropout_scales[n];
        for (std::size_t i = 0; i < d; ++i) h_in[i] = mask ? h[i] * (*mask)[i] : h[i];
        for (std::size_t k = 0; k < K; ++k) {
            const int y = s.ratings[k];
            check_level(y, p.levels);
            const double z = kernels::dot(p.row(k), h_in) + p.bias[k];
            const auto t = level_terms(z, scales[k], p.levels, y);
            out.loss -= t.log_prob;
            dz[k] = -t.dlogp_dz;
            gs[k] -= t.dlogp_ds * scales[k];
            gb[k] += dz[k];
            kernels::axpy(dz[k], h_in, {gw + k * d, d});
        }
        if (fused) {
            std::fill(dh.begin(), dh.end(), 0.0);
            for (std::size_t k = 0; k < K; ++k) kernels::axpy(dz[k], p.row(k), dh);
            if (mask) {
                for (std::size_t i = 0; i < d; ++i) dh[i] *= (*mask)[i];
            }
            // dh/dw_first = a1 (first - h), dh/dw_last = a2 (last - h)
            double g1 = 0.0;
            double g2 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                g1 += dh[i] * (s.first_mean[i] - h[i]);
                g2 += dh[i] * (s.last[i] - h[i]);
            }
            gfuse[0] += a1 * g1;
            gfuse[1] += a2 * g2;
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    out.loss *= inv;
    for (auto& g : out.flat) g *= inv;
    return out;
}

namespace {

std::vector<OdlSample> rated_samples(const Dataset& data, Split split) {
    std::vector<OdlSample> out;
    for (const auto* ex : data.rated(split)) {
        const auto& e = data.embedding(ex->id);
        out.push_back({e.first_mean, e.last, *ex->ratings});
    }
    return out;
}

} // namespace

OdlTrainResult train_odl(const Dataset& data, const OdlConfig& cfg) {
    cfg.validate();
    if (cfg.levels != data.levels()) {
        throw ValidationError(fmt::format("odl: config has {} levels, dataset has {}", cfg.levels,
                                          data.levels()));
    }
    const auto train = rated_samples(data, Split::train);
    const auto val = rated_samples(data, Split::val);
    if (train.empty()) throw ValidationError("odl: no rated training examples");
    if (val.empty()) throw ValidationError("odl: no rated validation examples");
    for (const auto& s : train) {
        if (s.ratings.size() != cfg.dims) {
            throw ValidationError(fmt::format("odl: ratings hold {} dimensions, config expects {}",
                                              s.ratings.size(), cfg.dims));
        }
    }

    OdlTrainResult result;
    OdlParams params =
        OdlParams::init(cfg.dims, data.dim(), cfg.levels, cfg.scale_init, cfg.readout, cfg.seed);
    std::vector<double> flat = params.flatten();
    OptState opt = OptState::fresh(flat.size());
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double keep = 1.0 - cfg.dropout;

    result.params = params;
    result.best_val_loss = nll(val, params);
    result.best_epoch = 0;
    result.log.push_back({0, nll(train, params), result.best_val_loss});
    if (!std::isfinite(result.best_val_loss)) {
        throw RuntimeFailure("odl: non-finite validation loss at initialization");
    }

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<OdlSample> batch;
    std::vector<std::vector<double>> masks;
    int bad_epochs = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            batch.clear();
            masks.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(train[order[i]]);
                if (cfg.dropout > 0.0) {
                    std::vector<double> m(data.dim());
                    for (auto& v : m) v = unit(rng) < keep ? 1.0 / keep : 0.0;
                    masks.push_back(std::move(m));
                }
            }
            const auto g = nll_grad(batch, params, masks);
            if (!std::isfinite(g.loss)) {
                throw RuntimeFailure(
                    fmt::format("odl: non-finite training loss in epoch {} (batch at {})", epoch, start));
            }
            epoch_loss += g.loss * static_cast<double>(end - start);
            adam_step(flat, g.flat, opt, cfg.lr);
            params.unflatten(flat);
        }
        const double train_loss = epoch_loss / static_cast<double>(order.size());
        const double val_loss = nll(val, params);
        if (!std::isfinite(val_loss)) {
            throw RuntimeFailure(fmt::format("odl: non-finite validation loss in epoch {}", epoch));
        }
        result.log.push_back({epoch, train_loss, val_loss});
        spdlog::debug("odl epoch {}: train {:.6f} val {:.6f}", epoch, train_loss, val_loss);
        if (val_loss < result.best_val_loss) {
            result.best_val_loss = val_loss;
            result.best_epoch = epoch;
            result.params = params;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.patience) {
            break;
        }
    }
    spdlog::info("odl: best epoch {} of {}, val nll {:.6f}", result.best_epoch,
                 result.log.back().epoch, result.best_val_loss);
    return result;
}

} // namespace lj
