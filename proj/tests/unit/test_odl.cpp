// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "likeness/error.hpp"
#include "likeness/odl.hpp"
#include "likeness/synth.hpp"
#include "support/helpers.hpp"

using namespace lj;
using Catch::Matchers::WithinAbs;

namespace {

// mpmath oracle values (tests/oracles/derive_values.py).
constexpr double kCat1 = 0.33181222783183389347;
constexpr double kCat2 = 0.081570193250836048737;
constexpr double kCat3 = 0.086617578917330057794;
constexpr double kCat5 = 0.41338242108266994221;
constexpr double kNllLevel5 = 0.88338215541877703213;
constexpr double kNllLevel3 = 2.44625249420588448337;
constexpr double kGradBLevel3 = 0.086617578917330057794;   // d nll / d b at z = 0, level 3
constexpr double kGradSrawLevel5 = 0.20531615262106552023;  // d nll / d s_raw at z = 0, level 5

OdlParams unit_odl(double bias, double scale) {
    OdlParams p;
    p.dims = 1;
    p.input = 1;
    p.levels = 5;
    p.weights = {0.0};
    p.bias = {bias};
    p.scale_raw = {std::log(scale)};
    p.readout.mode = ReadoutMode::mean;
    return p;
}

} // namespace

TEST_CASE("cut-points follow the scale formula") {
    const auto c = cutpoints(2.1, 5);
    REQUIRE(c.size() == 4);
    CHECK_THAT(c[0], WithinAbs(-0.7, 1e-12));
    CHECK_THAT(c[1], WithinAbs(-0.35, 1e-12));
    CHECK(c[2] == 0.0);
    CHECK_THAT(c[3], WithinAbs(0.35, 1e-12));
    CHECK(cutpoints(6.0, 5) == std::vector<double>{-2.0, -1.0, 0.0, 1.0});
    CHECK_THROWS_AS(cutpoints(1.0, 2), ValidationError);
    CHECK_THROWS_AS(cutpoints(0.0, 5), ValidationError);
    CHECK(cutpoint_coefficient(1, 5) == -1.0 / 3.0);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> s(0.01, 50.0);
    std::uniform_int_distribution<int> r(3, 12);
    for (int i = 0; i < 1000; ++i) {
        const double sc = s(rng);
        const int lv = r(rng);
        const auto cp = cutpoints(sc, lv);
        for (std::size_t j = 1; j < cp.size(); ++j) {
            CHECK(cp[j] > cp[j - 1]);
            CHECK_THAT(cp[j] - cp[j - 1], WithinAbs(sc / (2.0 * (lv - 2)), 1e-12 * sc));
        }
        if (lv == 5) CHECK(cp[2] == 0.0);
    }
}

TEST_CASE("category probabilities at z = 0") {
    std::vector<double> out(5);
    category_probs(0.0, 2.1, 5, out);
    CHECK_THAT(out[0], WithinAbs(kCat1, 1e-15));
    CHECK_THAT(out[1], WithinAbs(kCat2, 1e-15));
    CHECK_THAT(out[2], WithinAbs(kCat3, 1e-15));
    CHECK_THAT(out[3], WithinAbs(kCat3, 1e-15));
    CHECK_THAT(out[4], WithinAbs(kCat5, 1e-15));
    const auto dist = distribution(std::vector<double>{0.0}, std::vector<double>{2.1}, 5);
    CHECK(predict_levels(dist) == std::vector<int>{5});
}

TEST_CASE("cumulative probability is one half at a cut-point") {
    const auto cp = cutpoints(3.3, 5);
    for (std::size_t i = 0; i < cp.size(); ++i) {
        const auto dist = distribution(std::vector<double>{cp[i]}, std::vector<double>{3.3}, 5);
        CHECK(dist.cumulative(0)[i] == 0.5);
    }
}

TEST_CASE("saturated latent scores concentrate mass at the ends") {
    std::vector<double> out(5);
    category_probs(60.0, 2.1, 5, out);
    CHECK(out[4] > 1.0 - 1e-15);
    category_probs(-60.0, 2.1, 5, out);
    CHECK(out[0] > 1.0 - 1e-15);
    for (double p : out) CHECK(p > 0.0);
    CHECK(std::isfinite(category_log_prob(800.0, 2.1, 5, 1)));
    CHECK(category_log_prob(800.0, 2.1, 5, 1) == std::log(1e-300));
}

TEST_CASE("log probabilities agree with category probabilities") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> z(-6.0, 6.0), s(0.3, 9.0);
    std::vector<double> out(7);
    for (int i = 0; i < 500; ++i) {
        const double zz = z(rng), ss = s(rng);
        category_probs(zz, ss, 7, out);
        for (int lv = 1; lv <= 7; ++lv) {
            CHECK_THAT(category_log_prob(zz, ss, 7, lv), WithinAbs(std::log(out[lv - 1]), 1e-10));
        }
    }
}

TEST_CASE("predict_levels tie policy") {
    OrdinalDistribution d;
    d.dims = 2;
    d.levels = 5;
    d.cat_probs = {0.1, 0.35, 0.2, 0.35, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0};
    CHECK(predict_levels(d) == std::vector<int>{2, 3});
}

TEST_CASE("projection") {
    OdlParams p;
    p.dims = 1;
    p.input = 2;
    p.weights = {1.0, 2.0};
    p.bias = {0.0};
    p.scale_raw = {0.0};
    CHECK(project(std::vector<double>{3.0, 4.0}, p) == std::vector<double>{11.0});
    CHECK(project(std::vector<double>{3.0, 4.0}, p, std::vector<double>{1.0, 1.0}) ==
          std::vector<double>{11.0});
    CHECK(project(std::vector<double>{3.0, 4.0}, p, std::vector<double>{2.0, 0.0}) ==
          std::vector<double>{6.0});
    OdlParams q;
    q.dims = 3;
    q.input = 2;
    q.weights.assign(6, 0.0);
    q.bias = {1.0, 1.0, 1.0};
    q.scale_raw.assign(3, 0.0);
    CHECK(project(std::vector<double>{5.0, -7.0}, q) == std::vector<double>{1.0, 1.0, 1.0});
    CHECK_THROWS_AS(project(std::vector<double>{1.0}, q), ValidationError);
}

TEST_CASE("ordinal nll values") {
    const std::vector<double> h{0.0};
    const std::vector<int> five{5}, three{3};
    const auto p = unit_odl(0.0, 2.1);
    const std::vector<OdlSample> one{{h, h, five}};
    CHECK_THAT(nll(one, p), WithinAbs(kNllLevel5, 1e-14));
    const std::vector<OdlSample> two{{h, h, five}, {h, h, five}};
    CHECK_THAT(nll(two, p), WithinAbs(kNllLevel5, 1e-14));
    // Probability one half: z exactly on the upper cut-point, top level.
    const auto half = unit_odl(0.35, 2.1);
    CHECK_THAT(nll(one, half), WithinAbs(std::log(2.0), 1e-14));
    const std::vector<OdlSample> mid{{h, h, three}};
    CHECK_THAT(nll(mid, p), WithinAbs(kNllLevel3, 1e-13));
}

TEST_CASE("nll gradient at the centered level") {
    const std::vector<double> h{0.0};
    const std::vector<int> three{3}, five{5};
    const std::vector<OdlSample> mid{{h, h, three}};
    // Layout: W (1), b (1), s_raw (1), w_first, w_last.
    const auto g = nll_grad(mid, unit_odl(0.0, 2.1));
    CHECK_THAT(g.flat[1], WithinAbs(kGradBLevel3, 1e-14));
    // The gradient vanishes midway between the two bounding cut-points.
    const auto g0 = nll_grad(mid, unit_odl(-0.175, 2.1));
    CHECK_THAT(g0.flat[1], WithinAbs(0.0, 1e-15));
    const std::vector<OdlSample> top{{h, h, five}};
    CHECK_THAT(nll_grad(top, unit_odl(0.0, 2.1)).flat[2], WithinAbs(kGradSrawLevel5, 1e-14));
}

TEST_CASE("gradient at argmax labels is computed, not assumed zero") {
    std::mt19937_64 rng(41);
    auto p = test::random_odl(rng, 3, 4, 5);
    const auto f = test::gauss_vec(rng, 4), l = test::gauss_vec(rng, 4);
    const auto z = project(readout(f, l, p.readout), p);
    const auto levels = predict_levels(distribution(z, p));
    const std::vector<OdlSample> b{{f, l, levels}};
    const auto g = nll_grad(b, p);
    double norm = 0.0;
    for (double x : g.flat) norm += x * x;
    CHECK(norm > 0.0);
}

TEST_CASE("nll gradient matches finite differences") {
    std::mt19937_64 rng(43);
    for (ReadoutMode mode : {ReadoutMode::fused, ReadoutMode::mean, ReadoutMode::last}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto p = test::random_odl(rng, 2, 3, 5, mode);
            std::vector<std::vector<double>> f, l;
            std::vector<std::vector<int>> y;
            std::uniform_int_distribution<int> lv(1, 5);
            for (int n = 0; n < 4; ++n) {
                f.push_back(test::gauss_vec(rng, 3));
                l.push_back(test::gauss_vec(rng, 3));
                y.push_back({lv(rng), lv(rng)});
            }
            std::vector<OdlSample> batch;
            for (int n = 0; n < 4; ++n) batch.push_back({f[n], l[n], y[n]});
            const auto analytic = nll_grad(batch, p);
            CHECK_THAT(analytic.loss, WithinAbs(nll(batch, p), 1e-12));
            const ScalarFn fn = [&](std::span<const double> flat) {
                OdlParams q = p;
                q.unflatten(flat);
                return nll(batch, q);
            };
            const auto numeric = finite_diff_grad(fn, p.flatten(), 1e-6);
            CHECK(test::rel_error(analytic.flat, numeric) <= 1e-4);
            if (mode != ReadoutMode::fused) {
                // Fusion weights do not reach the loss.
                const auto n = analytic.flat.size();
                CHECK(analytic.flat[n - 1] == 0.0);
                CHECK(analytic.flat[n - 2] == 0.0);
            }
        }
    }
}

TEST_CASE("dropout scales enter the gradient") {
    std::mt19937_64 rng(47);
    auto p = test::random_odl(rng, 2, 3, 5);
    const auto f = test::gauss_vec(rng, 3), l = test::gauss_vec(rng, 3);
    const std::vector<int> y{2, 4};
    const std::vector<OdlSample> b{{f, l, y}};
    const std::vector<std::vector<double>> mask{{1.0 / 0.7, 0.0, 1.0 / 0.7}};
    const auto g = nll_grad(b, p, mask);
    const ScalarFn fn = [&](std::span<const double> flat) {
        OdlParams q = p;
        q.unflatten(flat);
        return nll_grad(b, q, mask).loss;
    };
    CHECK(test::rel_error(g.flat, finite_diff_grad(fn, p.flatten(), 1e-6)) <= 1e-4);
    // The dropped input column receives no weight gradient.
    CHECK(g.flat[1] == 0.0);
    CHECK(g.flat[3 + 1] == 0.0);
}

TEST_CASE("flatten and unflatten round trip") {
    std::mt19937_64 rng(53);
    const auto p = test::random_odl(rng, 3, 4, 5);
    REQUIRE(p.flatten().size() == p.parameter_count());
    OdlParams q = p;
    for (auto& w : q.weights) w = 0.0;
    q.unflatten(p.flatten());
    CHECK(q.flatten() == p.flatten());
    CHECK_THROWS_AS(q.unflatten(std::vector<double>(3)), ValidationError);
}

TEST_CASE("init uses the configured scale") {
    const auto p = OdlParams::init(18, 6, 5, 2.1, ReadoutMode::fused, 9);
    CHECK(p.weights.size() == 18 * 6);
    for (std::size_t k = 0; k < 18; ++k) CHECK_THAT(p.scale(k), WithinAbs(2.1, 1e-15));
    for (double b : p.bias) CHECK(b == 0.0);
    for (double w : p.weights) CHECK(std::abs(w) <= 1.0 / std::sqrt(6.0));
    CHECK(p.readout.fusion.w_first == 0.0);
    CHECK(OdlParams::init(18, 6, 5, 2.1, ReadoutMode::fused, 9).weights == p.weights);
}

namespace {

Dataset small_synth(std::uint64_t seed) {
    SynthConfig sc;
    sc.d = 6;
    sc.n_train = 200;
    sc.n_val = 60;
    sc.n_test = 60;
    sc.seed = seed;
    auto data = generate(sc);
    return assemble(std::move(data.embeddings), std::move(data.labels));
}

} // namespace

TEST_CASE("training is deterministic and lr = 0 freezes params") {
    const Dataset data = small_synth(3);
    OdlConfig cfg;
    cfg.lr = 1e-2;
    cfg.max_epochs = 5;
    cfg.seed = 77;
    const auto a = train_odl(data, cfg);
    const auto b = train_odl(data, cfg);
    CHECK(a.params.flatten() == b.params.flatten());
    CHECK(a.log.size() == b.log.size());
    CHECK(a.best_val_loss < a.log.front().val_loss);

    cfg.lr = 0.0;
    const auto frozen = train_odl(data, cfg);
    const auto init = OdlParams::init(cfg.dims, data.dim(), cfg.levels, cfg.scale_init, cfg.readout, cfg.seed);
    CHECK(frozen.params.flatten() == init.flatten());
}

TEST_CASE("training rejects unusable data") {
    const Dataset data = small_synth(4);
    OdlConfig cfg;
    cfg.dims = 17;
    CHECK_THROWS_AS(train_odl(data, cfg), ValidationError);
    OdlConfig bad;
    bad.levels = 2;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = {};
    bad.scale_init = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}
