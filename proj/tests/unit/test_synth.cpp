// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "likeness/error.hpp"
#include "likeness/synth.hpp"
#include "support/helpers.hpp"

using namespace lj;

TEST_CASE("sample_level follows the inverse cdf") {
    std::mt19937_64 rng(113);
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 40000; ++i) ++counts[sample_level(probs, rng) - 1];
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(counts[k] / 40000.0 - probs[k]) < 0.01);
    const std::vector<double> one_hot{0.0, 0.0, 1.0};
    for (int i = 0; i < 100; ++i) CHECK(sample_level(one_hot, rng) == 3);
}

TEST_CASE("generated data satisfies the datamodel invariants") {
    SynthConfig cfg;
    cfg.n_train = 300;
    cfg.n_val = 100;
    cfg.n_test = 100;
    cfg.seed = 17;
    const auto data = generate(cfg);
    REQUIRE(data.embeddings.size() == 500);
    REQUIRE(data.labels.size() == 500);
    std::size_t ph = 0, machine = 0;
    for (const auto& ex : data.labels) {
        CHECK_NOTHROW(validate_example(ex, cfg.levels));
        CHECK(ex.ratings.has_value());
        if (ex.source == Source::PH) {
            ++ph;
            CHECK(ex.split == Split::test);
        }
        machine += ex.label == Label::machine;
    }
    CHECK(ph > 0);
    CHECK(machine > 150);
    CHECK(machine < 350);
    for (const auto& e : data.embeddings) CHECK(e.dim() == cfg.d);
    CHECK(data.truth.bayes_level_accuracy > 0.2);
    CHECK(data.truth.bayes_binary_accuracy > 0.9);
    CHECK_NOTHROW(assemble(data.embeddings, data.labels));
}

TEST_CASE("generation is deterministic in the seed") {
    SynthConfig cfg;
    cfg.n_train = 50;
    cfg.n_val = 20;
    cfg.n_test = 20;
    cfg.seed = 3;
    const auto a = generate(cfg), b = generate(cfg);
    std::ostringstream ea, eb;
    write_embeddings(ea, a.embeddings);
    write_embeddings(eb, b.embeddings);
    CHECK(ea.str() == eb.str());
    cfg.seed = 4;
    std::ostringstream ec;
    write_embeddings(ec, generate(cfg).embeddings);
    CHECK(ec.str() != ea.str());
}

TEST_CASE("noise-free labels match the planted classifier") {
    SynthConfig cfg;
    cfg.noise_std = 0.0;
    cfg.n_train = 100;
    cfg.n_val = 50;
    cfg.n_test = 200;
    const auto data = generate(cfg);
    CHECK(data.truth.bayes_binary_accuracy == 1.0);
}

TEST_CASE("degenerate configurations are rejected") {
    SynthConfig cfg;
    cfg.spread = 0.0;
    cfg.class_margin = 0.0;
    CHECK_THROWS_AS(generate(cfg), ValidationError);
    cfg = {};
    cfg.levels = 2;
    CHECK_THROWS_AS(generate(cfg), ValidationError);
    cfg = {};
    cfg.n_val = 0;
    CHECK_THROWS_AS(generate(cfg), ValidationError);
}

TEST_CASE("files round trip through the loaders") {
    SynthConfig cfg;
    cfg.n_train = 40;
    cfg.n_val = 10;
    cfg.n_test = 10;
    const auto data = generate(cfg);
    const auto dir = test::scratch_dir("synth");
    write_synth(dir, data);
    Warnings w;
    const auto emb = load_embeddings(dir / "embeddings.jsonl", &w);
    const auto lab = load_labels(dir / "labels.jsonl", cfg.levels, &w);
    CHECK(w.empty());
    CHECK(emb.size() == 60);
    CHECK(lab.size() == 60);
    for (std::size_t i = 0; i < emb.size(); ++i) CHECK(emb[i].first_mean == data.embeddings[i].first_mean);
    CHECK(std::filesystem::exists(dir / "truth.json"));

    SynthConfig small = cfg;
    small.dims = 4;
    CHECK_THROWS_AS(write_synth(dir, generate(small)), ValidationError);
}
