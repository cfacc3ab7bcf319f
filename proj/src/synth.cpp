// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/synth.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "likeness/checkpoint.hpp"
#include "likeness/error.hpp"
#include "likeness/registry.hpp"

namespace lj {

void SynthConfig::validate() const {
    check_levels(levels);
    if (d == 0 || dims == 0) throw ValidationError("synth: d and K must be positive");
    if (n_train == 0 || n_val == 0 || n_test == 0) {
        throw ValidationError("synth: split sizes must be positive");
    }
    if (!(class_margin >= 0.0) || !(noise_std >= 0.0) || !(spread >= 0.0) || !(source_noise >= 0.0)) {
        throw ValidationError("synth: margins and noise levels must be >= 0");
    }
    if (spread == 0.0 && class_margin == 0.0) {
        throw ValidationError("synth: degenerate config (zero spread and zero class margin)");
    }
}

int sample_level(std::span<const double> cat_probs, std::mt19937_64& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < cat_probs.size(); ++i) {
        cum += cat_probs[i];
        if (u < cum) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(cat_probs.size());
}

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Planted ordinal layer: W ~ N(0, 1.5^2 / d), b ~ N(0, 0.5^2), s ~ U(6, 12).
// Scales this wide leave every level reachable by argmax.
OdlParams plant_odl(const SynthConfig& cfg, std::mt19937_64& rng) {
    OdlParams p;
    p.dims = cfg.dims;
    p.input = cfg.d;
    p.levels = cfg.levels;
    p.readout.mode = ReadoutMode::fused;
    std::normal_distribution<double> w(0.0, 1.5 / std::sqrt(static_cast<double>(cfg.d)));
    std::normal_distribution<double> b(0.0, 0.5);
    std::uniform_real_distribution<double> s(6.0, 12.0);
    p.weights.resize(cfg.dims * cfg.d);
    for (auto& x : p.weights) x = w(rng);
    p.bias.resize(cfg.dims);
    for (auto& x : p.bias) x = b(rng);
    p.scale_raw.resize(cfg.dims);
    for (auto& x : p.scale_raw) x = std::log(s(rng));
    return p;
}

} // namespace

SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t K = cfg.dims;
    const std::size_t d = cfg.d;

    SynthData out;
    OdlParams odl = plant_odl(cfg, rng);

    // Machine direction v in latent space, scaled so that W^T v has unit norm.
    std::vector<double> v(K);
    for (auto& x : v) x = gauss(rng);
    std::vector<double> u(d, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < d; ++i) u[i] += v[k] * odl.weights[k * d + i];
    }
    const double un = norm(u);
    if (!(un > 0.0)) throw RuntimeFailure("synth: planted projection is degenerate");
    for (auto& x : v) x /= un;
    for (auto& x : u) x /= un;
    // Remove the bias component along v so the planted margin has no offset.
    double vb = 0.0;
    double vv = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        vb += v[k] * odl.bias[k];
        vv += v[k] * v[k];
    }
    for (std::size_t k = 0; k < K; ++k) odl.bias[k] -= vb / vv * v[k];

    ClfParams clf;
    clf.dims = K;
    clf.weights.resize(2 * K);
    for (std::size_t k = 0; k < K; ++k) {
        clf.weights[kHumanRow * K + k] = -0.5 * v[k];
        clf.weights[kMachineRow * K + k] = 0.5 * v[k];
    }

    const std::size_t total = cfg.n_train + cfg.n_val + cfg.n_test;
    const int width = static_cast<int>(std::to_string(total).size());
    std::uniform_real_distribution<double> length(20.0, 60.0);
    std::size_t test_machine = 0;
    std::size_t bayes_level_hits = 0;
    std::size_t bayes_binary_hits = 0;
    std::vector<double> h(d);
    std::vector<double> cats(static_cast<std::size_t>(cfg.levels));

    for (std::size_t n = 0; n < total; ++n) {
        const Split split = n < cfg.n_train ? Split::train
                            : n < cfg.n_train + cfg.n_val ? Split::val
                                                          : Split::test;
        const double c = (rng() & 1U) ? 1.0 : -1.0;
        EmbeddingPair e;
        e.id = fmt::format("syn-{:0{}}", n, width);
        e.first_mean.resize(d);
        e.last.resize(d);
        for (std::size_t i = 0; i < d; ++i) {
            h[i] = cfg.spread * (c * 0.5 * cfg.class_margin * u[i] + gauss(rng));
            const double delta = cfg.source_noise * gauss(rng);
            // Stored as float32; keep the in-memory copy identical to the file.
            e.first_mean[i] = static_cast<double>(static_cast<float>(h[i] - delta));
            e.last[i] = static_cast<double>(static_cast<float>(h[i] + delta));
        }
        const auto z = latent_scores(e, odl);
        const auto planted = classify(z, clf);
        const Label label =
            planted.margin + cfg.noise_std * gauss(rng) > 0.0 ? Label::machine : Label::human;

        std::vector<int> ratings(K);
        for (std::size_t k = 0; k < K; ++k) {
            category_probs(z[k], odl.scale(k), cfg.levels, cats);
            ratings[k] = sample_level(cats, rng);
        }

        LabeledExample ex;
        ex.id = e.id;
        ex.label = label;
        ex.split = split;
        ex.language = n % 2 == 0 ? Language::en : Language::zh;
        ex.source = label == Label::human ? Source::HH : Source::HM;
        if (split == Split::test && label == Label::machine && test_machine++ % 2 == 1) {
            ex.source = Source::PH;
        }
        ex.duration = std::round(length(rng) * 10.0) / 10.0;

        if (split == Split::test) {
            const auto best = predict_levels(distribution(z, odl));
            for (std::size_t k = 0; k < K; ++k) bayes_level_hits += best[k] == ratings[k] ? 1 : 0;
            bayes_binary_hits += planted.label == label ? 1 : 0;
        }
        ex.ratings = std::move(ratings);
        out.embeddings.push_back(std::move(e));
        out.labels.push_back(std::move(ex));
    }

    out.truth.odl = std::move(odl);
    out.truth.clf = std::move(clf);
    out.truth.bayes_level_accuracy =
        static_cast<double>(bayes_level_hits) / static_cast<double>(cfg.n_test * K);
    out.truth.bayes_binary_accuracy =
        static_cast<double>(bayes_binary_hits) / static_cast<double>(cfg.n_test);
    return out;
}

void write_synth(const std::filesystem::path& dir, const SynthData& data) {
    if (data.truth.odl.dims != kNumDimensions) {
        throw ValidationError(fmt::format("synth: files require {} dimensions, data has {}",
                                          kNumDimensions, data.truth.odl.dims));
    }
    std::filesystem::create_directories(dir);
    save_embeddings(dir / "embeddings.jsonl", data.embeddings);
    save_labels(dir / "labels.jsonl", data.labels);

    nlohmann::ordered_json truth;
    truth["bayes_level_accuracy"] = data.truth.bayes_level_accuracy;
    truth["bayes_binary_accuracy"] = data.truth.bayes_binary_accuracy;
    truth["planted"] = nlohmann::ordered_json::parse(checkpoint_text({data.truth.odl, data.truth.clf}));
    std::ofstream out(dir / "truth.json", std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure(fmt::format("cannot write '{}'", (dir / "truth.json").string()));
    out << truth.dump(2) << '\n';
}

} // namespace lj
