// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "likeness/error.hpp"
#include "likeness/search.hpp"
#include "likeness/synth.hpp"

using namespace lj;

namespace {

Dataset tiny() {
    SynthConfig sc;
    sc.d = 6;
    sc.n_train = 120;
    sc.n_val = 60;
    sc.n_test = 40;
    sc.seed = 21;
    auto data = generate(sc);
    return assemble(std::move(data.embeddings), std::move(data.labels));
}

OdlConfig quick_odl() {
    OdlConfig c;
    c.max_epochs = 3;
    return c;
}

ClfConfig quick_clf() {
    ClfConfig c;
    c.max_epochs = 5;
    return c;
}

} // namespace

TEST_CASE("scale grid uses exact index arithmetic") {
    SearchSpace s;
    const auto v = s.scales();
    REQUIRE(v.size() == 901);
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 10.0);
    CHECK(v[110] == 2.1);
    CHECK(s.grid_size() == 4u * 4u * 901u * 5u * 4u * 4u);
}

TEST_CASE("grid order is lexicographic and clamps the budget") {
    SearchSpace s;
    s.strategy = SearchStrategy::grid;
    s.odl_lr = {1e-2};
    s.odl_batch = {16};
    s.scale_min = 2.0;
    s.scale_max = 2.0;
    s.dropout = {0.1, 0.3};
    s.clf_lr = {1e-3};
    s.clf_batch = {32, 64};
    s.budget = 10;
    bool clamped = false;
    const auto t = sample_trials(s, &clamped);
    CHECK(clamped);
    REQUIRE(t.size() == 4);
    CHECK((t[0].dropout == 0.1 && t[0].clf_batch == 32));
    CHECK((t[1].dropout == 0.1 && t[1].clf_batch == 64));
    CHECK((t[2].dropout == 0.3 && t[2].clf_batch == 32));
}

TEST_CASE("random sampling is reproducible and stays in the space") {
    SearchSpace s;
    s.budget = 50;
    s.seed = 8;
    const auto a = sample_trials(s), b = sample_trials(s);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].scale == b[i].scale);
        CHECK(a[i].odl_lr == b[i].odl_lr);
        CHECK(a[i].scale >= 1.0);
        CHECK(a[i].scale <= 10.0);
    }
    s.seed = 9;
    const auto c = sample_trials(s);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].scale != c[i].scale;
    CHECK(differs);
}

TEST_CASE("space validation") {
    SearchSpace s;
    s.budget = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.dropout.clear();
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.scale_min = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("search runs, logs every trial and ranks") {
    const Dataset data = tiny();
    SearchSpace s;
    s.budget = 1;
    s.seed = 2;
    std::vector<Trial> seen;
    const auto one = run_search(s, data, quick_odl(), quick_clf(), [&](const Trial& t) { seen.push_back(t); });
    REQUIRE(one.ranked.size() == 1);
    CHECK(seen.size() == 1);
    CHECK(one.ranked[0].index == 0);

    // Two identical configurations give identical metrics.
    SearchSpace same = s;
    same.strategy = SearchStrategy::grid;
    same.odl_lr = {1e-2};
    same.odl_batch = {32};
    same.scale_min = same.scale_max = 2.1;
    same.dropout = {0.3, 0.3};
    same.clf_lr = {1e-2};
    same.clf_batch = {64};
    same.budget = 2;
    const auto twin = run_search(same, data, quick_odl(), quick_clf());
    REQUIRE(twin.ranked.size() == 2);
    CHECK(twin.ranked[0].val_accuracy == twin.ranked[1].val_accuracy);
    CHECK(twin.ranked[0].val_loss == twin.ranked[1].val_loss);
    CHECK(twin.ranked[0].index == 0);

    SearchSpace many = s;
    many.budget = 4;
    const auto r = run_search(many, data, quick_odl(), quick_clf());
    for (std::size_t i = 1; i < r.ranked.size(); ++i) {
        const auto& a = r.ranked[i - 1];
        const auto& b = r.ranked[i];
        CHECK((a.val_accuracy > b.val_accuracy ||
               (a.val_accuracy == b.val_accuracy && a.val_loss <= b.val_loss)));
    }
    const auto j = to_json(r.ranked[0]);
    CHECK(j.contains("wall_seconds"));
    CHECK(j.contains("val_accuracy"));
}

TEST_CASE("sensitivity report") {
    std::vector<Trial> t(4);
    t[0].config.dropout = 0.1;
    t[0].val_accuracy = 0.8;
    t[1].config.dropout = 0.1;
    t[1].val_accuracy = 0.6;
    t[2].config.dropout = 0.3;
    t[2].val_accuracy = 0.9;
    t[3].config.dropout = 0.3;
    t[3].val_accuracy = 0.9;
    const auto rows = sensitivity(t);
    bool found = false;
    for (const auto& r : rows) {
        if (r.parameter == "dropout" && r.value == 0.1) {
            found = true;
            CHECK(r.n == 2);
            CHECK(std::abs(r.mean - 0.7) < 1e-12);
            CHECK(std::abs(r.sem - 0.1) < 1e-12);
        }
    }
    CHECK(found);
    CHECK(format_sensitivity(rows).find("dropout") != std::string::npos);
}

TEST_CASE("best trial approaches the planted binary accuracy") {
    SynthConfig sc;
    sc.n_train = 600;
    sc.n_val = 200;
    sc.n_test = 200;
    sc.seed = 31;
    auto synth = generate(sc);
    const double bayes = synth.truth.bayes_binary_accuracy;
    const Dataset data = assemble(std::move(synth.embeddings), std::move(synth.labels));
    SearchSpace s;
    s.odl_lr = {1e-2, 1e-5};
    s.budget = 4;
    s.seed = 6;
    const auto r = run_search(s, data, OdlConfig{}, ClfConfig{});
    CHECK(r.ranked.front().val_accuracy >= 0.95 * bayes);
}
