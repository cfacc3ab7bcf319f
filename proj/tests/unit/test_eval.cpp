// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "likeness/error.hpp"
#include "likeness/eval.hpp"

using namespace lj;
using Catch::Matchers::WithinAbs;

namespace {

double brute_auc(const std::vector<double>& s, const std::vector<Label>& y) {
    double num = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != Label::machine) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != Label::human) continue;
            ++pairs;
            num += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    }
    return num / static_cast<double>(pairs);
}

} // namespace

TEST_CASE("binary accuracy per source and overall") {
    using L = Label;
    using S = Source;
    const std::vector<L> preds{L::human, L::human, L::machine, L::machine,
                               L::machine, L::machine, L::machine, L::machine};
    const std::vector<L> labels{L::human, L::human, L::human, L::human,
                                L::machine, L::machine, L::machine, L::machine};
    const std::vector<S> src{S::HH, S::HH, S::HH, S::HH, S::HM, S::HM, S::HM, S::HM};
    const auto a = binary_accuracy(preds, labels, src);
    CHECK(a.by_source.at(S::HH) == 0.5);
    CHECK(a.by_source.at(S::HM) == 1.0);
    CHECK(a.overall == 0.75);
    CHECK(a.total == 8);
    CHECK_FALSE(a.by_source.contains(S::PH));
    const auto all = binary_accuracy(labels, labels, src);
    CHECK(all.overall == 1.0);
    CHECK(all.by_source.at(S::HH) == 1.0);
}

TEST_CASE("roc auc small cases") {
    using L = Label;
    CHECK(roc_auc(std::vector<double>{0.9, 0.8, 0.3}, std::vector<L>{L::machine, L::machine, L::human}) == 1.0);
    CHECK(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.1},
                  std::vector<L>{L::machine, L::machine, L::human, L::human}) == 0.75);
    CHECK_THROWS_AS(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<L>{L::human, L::human}),
                    ValidationError);
}

TEST_CASE("roc auc equals brute force and flips under negation") {
    std::mt19937_64 rng(97);
    std::uniform_int_distribution<int> n(2, 200), coarse(0, 9);
    for (int t = 0; t < 100; ++t) {
        const int m = n(rng);
        std::vector<double> s(m), neg(m);
        std::vector<Label> y(m);
        for (int i = 0; i < m; ++i) {
            s[i] = coarse(rng) / 10.0;
            neg[i] = -s[i];
            y[i] = rng() & 1 ? Label::machine : Label::human;
        }
        y[0] = Label::machine;
        y[1] = Label::human;
        const double auc = roc_auc(s, y);
        CHECK(auc == brute_auc(s, y));
        CHECK_THAT(roc_auc(neg, y), WithinAbs(1.0 - auc, 1e-12));
    }
}

TEST_CASE("level groups") {
    CHECK(level_group(1) == level_group(2));
    CHECK(level_group(2) != level_group(3));
    CHECK(level_group(3) != level_group(4));
    CHECK(level_group(4) == level_group(5));
    CHECK_THROWS_AS(level_group(0), ValidationError);
    CHECK_THROWS_AS(level_group(6), ValidationError);
}

TEST_CASE("fine-grained accuracy definitions") {
    auto one = [](int pred, int truth) {
        const std::vector<std::vector<int>> p{{pred}}, t{{truth}};
        return fine_grained_accuracy(p, t).overall;
    };
    auto a = one(5, 4);
    CHECK((a.exact == 0.0 && a.grouped == 1.0 && a.nearby == 1.0));
    a = one(3, 2);
    CHECK((a.exact == 0.0 && a.grouped == 0.0 && a.nearby == 1.0));
    a = one(5, 3);
    CHECK((a.exact == 0.0 && a.grouped == 0.0 && a.nearby == 0.0));
    a = one(3, 3);
    CHECK((a.exact == 1.0 && a.grouped == 1.0 && a.nearby == 1.0));
}

TEST_CASE("fine-grained accuracy matches a direct oracle") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> lv(1, 5), n(1, 30), k(1, 18);
    auto bucket = [](int l) { return l <= 2 ? 0 : l == 3 ? 1 : 2; };
    for (int t = 0; t < 1000; ++t) {
        const int N = n(rng), K = k(rng);
        std::vector<std::vector<int>> p(N, std::vector<int>(K)), y(N, std::vector<int>(K));
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < K; ++j) {
                p[i][j] = lv(rng);
                y[i][j] = lv(rng);
            }
        }
        const auto f = fine_grained_accuracy(p, y);
        REQUIRE(f.per_dim.size() == static_cast<std::size_t>(K));
        double te = 0, tg = 0, tn = 0;
        for (int j = 0; j < K; ++j) {
            double e = 0, g = 0, nb = 0;
            for (int i = 0; i < N; ++i) {
                e += p[i][j] == y[i][j];
                g += bucket(p[i][j]) == bucket(y[i][j]);
                nb += std::abs(p[i][j] - y[i][j]) <= 1;
            }
            te += e;
            tg += g;
            tn += nb;
            CHECK(f.per_dim[j].exact == e / N);
            CHECK(f.per_dim[j].grouped == g / N);
            CHECK(f.per_dim[j].nearby == nb / N);
            CHECK(f.per_dim[j].exact <= f.per_dim[j].grouped);
            CHECK(f.per_dim[j].exact <= f.per_dim[j].nearby);
        }
        CHECK(f.overall.exact == te / (N * K));
        CHECK(f.overall.grouped == tg / (N * K));
        CHECK(f.overall.nearby == tn / (N * K));
    }
}

TEST_CASE("success rate") {
    std::vector<Judgment> j;
    for (int i = 0; i < 10; ++i) j.push_back({"sys", i < 3});
    // 13 of 15 English human-speaker trials judged human.
    for (int i = 0; i < 15; ++i) j.push_back({"human/en", i < 13});
    const auto r = success_rate(j);
    CHECK(r.at("sys").rate == 0.3);
    CHECK_FALSE(r.at("sys").above_chance);
    CHECK_THAT(r.at("human/en").rate, WithinAbs(0.867, 5e-4));
    CHECK(r.at("human/en").above_chance);
    CHECK_FALSE(r.contains("other"));

    std::mt19937_64 rng(103);
    auto shuffled = j;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto r2 = success_rate(shuffled);
    CHECK(r2.at("sys").rate == r.at("sys").rate);
    CHECK(r2.at("human/en").rate == r.at("human/en").rate);
}

TEST_CASE("cochran-armitage two-bin closed form") {
    // Z = 6 / sqrt(5); also the square root of the 2x2 Pearson chi-square 7.2.
    const std::vector<TrendBin> b{{10, 2, 1.0}, {10, 8, 2.0}};
    const auto r = cochran_armitage(b);
    CHECK_THAT(r.z, WithinAbs(2.6832815729997476357, 1e-9));
    CHECK_THAT(r.p, WithinAbs(0.0072903580915356414814, 1e-9));
}

TEST_CASE("cochran-armitage invariances and errors") {
    const std::vector<TrendBin> flat{{10, 5, 1.0}, {20, 10, 2.0}, {8, 4, 3.0}};
    const auto f = cochran_armitage(flat);
    CHECK(f.z == 0.0);
    CHECK(f.p == 1.0);

    std::mt19937_64 rng(107);
    std::uniform_int_distribution<int> n(5, 80);
    std::uniform_real_distribution<double> a(0.1, 20.0), c(-50.0, 50.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<TrendBin> bins;
        for (int j = 0; j < 5; ++j) {
            const auto nn = static_cast<std::size_t>(n(rng));
            bins.push_back({nn, std::uniform_int_distribution<std::size_t>(1, nn - 1)(rng), j + 1.0});
        }
        const auto base = cochran_armitage(bins);
        const double aa = a(rng), cc = c(rng);
        auto moved = bins;
        for (auto& b : moved) b.score = aa * b.score + cc;
        CHECK_THAT(cochran_armitage(moved).z, WithinAbs(base.z, 1e-10));
    }

    CHECK_THROWS_AS(cochran_armitage(std::vector<TrendBin>{{10, 3, 1.0}}), ValidationError);
    CHECK_THROWS_AS(cochran_armitage(std::vector<TrendBin>{{10, 0, 1.0}, {5, 0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(cochran_armitage(std::vector<TrendBin>{{10, 10, 1.0}, {5, 5, 2.0}}), ValidationError);
}

TEST_CASE("cochran-armitage on the published length bins") {
    // Human-human length bins, integer scores 1..8.
    const std::vector<TrendBin> hh{{5, 2, 1},    {50, 39, 2},  {152, 99, 3}, {246, 173, 4},
                                   {174, 119, 5}, {78, 56, 6}, {76, 64, 7},  {141, 102, 8}};
    const auto r = cochran_armitage(hh);
    CHECK_THAT(r.z, WithinAbs(1.661318895, 1e-8));
    CHECK_THAT(r.p, WithinAbs(0.09664941707, 1e-9));
    CHECK_THAT(r.z, WithinAbs(1.6604, 0.05));
}
