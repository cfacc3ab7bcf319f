// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "likeness/error.hpp"
#include "likeness/judge.hpp"

namespace lj {

void SearchSpace::validate() const {
    if (odl_lr.empty() || odl_batch.empty() || dropout.empty() || clf_lr.empty() ||
        clf_batch.empty()) {
        throw ValidationError("search: every axis needs at least one value");
    }
    for (double x : odl_lr) {
        if (!(x > 0.0)) throw ValidationError("search: learning rates must be > 0");
    }
    for (double x : clf_lr) {
        if (!(x > 0.0)) throw ValidationError("search: learning rates must be > 0");
    }
    for (double x : dropout) {
        if (!(x >= 0.0 && x < 1.0)) throw ValidationError("search: dropout must be in [0, 1)");
    }
    for (auto b : odl_batch) {
        if (b == 0) throw ValidationError("search: batch sizes must be > 0");
    }
    for (auto b : clf_batch) {
        if (b == 0) throw ValidationError("search: batch sizes must be > 0");
    }
    if (!(scale_min > 0.0) || !(scale_max >= scale_min) || !(scale_step > 0.0)) {
        throw ValidationError("search: need 0 < scale_min <= scale_max and scale_step > 0");
    }
    if (budget == 0) throw ValidationError("search: budget must be > 0");
}

std::vector<double> SearchSpace::scales() const {
    std::vector<double> out;
    // Index-based so the grid does not accumulate rounding drift.
    const auto n = static_cast<std::size_t>(std::floor((scale_max - scale_min) / scale_step + 1e-9));
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        out.push_back(std::round((scale_min + static_cast<double>(i) * scale_step) * 1e9) / 1e9);
    }
    return out;
}

std::size_t SearchSpace::grid_size() const {
    return odl_lr.size() * odl_batch.size() * scales().size() * dropout.size() * clf_lr.size() *
           clf_batch.size();
}

std::vector<TrialConfig> sample_trials(const SearchSpace& space, bool* clamped) {
    space.validate();
    const auto scale_values = space.scales();
    std::vector<TrialConfig> out;
    if (clamped) *clamped = false;

    if (space.strategy == SearchStrategy::grid) {
        std::size_t n = space.budget;
        const std::size_t total = space.grid_size();
        if (n > total) {
            spdlog::warn("search: budget {} exceeds grid size {}; clamping", n, total);
            n = total;
            if (clamped) *clamped = true;
        }
        // Lexicographic, last axis fastest.
        const std::array<std::size_t, 6> sizes{space.odl_lr.size(),  space.odl_batch.size(),
                                               scale_values.size(),   space.dropout.size(),
                                               space.clf_lr.size(),   space.clf_batch.size()};
        for (std::size_t t = 0; t < n; ++t) {
            std::array<std::size_t, 6> idx{};
            std::size_t rem = t;
            for (std::size_t a = sizes.size(); a-- > 0;) {
                idx[a] = rem % sizes[a];
                rem /= sizes[a];
            }
            out.push_back({space.odl_lr[idx[0]], space.odl_batch[idx[1]], scale_values[idx[2]],
                           space.dropout[idx[3]], space.clf_lr[idx[4]], space.clf_batch[idx[5]]});
        }
        return out;
    }

    std::mt19937_64 rng(space.seed);
    auto pick = [&rng](const auto& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    for (std::size_t t = 0; t < space.budget; ++t) {
        TrialConfig c;
        c.odl_lr = pick(space.odl_lr);
        c.odl_batch = pick(space.odl_batch);
        c.scale = pick(scale_values);
        c.dropout = pick(space.dropout);
        c.clf_lr = pick(space.clf_lr);
        c.clf_batch = pick(space.clf_batch);
        out.push_back(c);
    }
    return out;
}

SearchResult run_search(const SearchSpace& space, const Dataset& data, const OdlConfig& base_odl,
                        const ClfConfig& base_clf, const TrialSink& sink) {
    SearchResult result;
    const auto configs = sample_trials(space, &result.budget_clamped);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto& c = configs[i];
        OdlConfig ocfg = base_odl;
        ocfg.lr = c.odl_lr;
        ocfg.batch_size = c.odl_batch;
        ocfg.scale_init = c.scale;
        ocfg.dropout = c.dropout;
        ClfConfig ccfg = base_clf;
        ccfg.lr = c.clf_lr;
        ccfg.batch_size = c.clf_batch;

        const auto start = std::chrono::steady_clock::now();
        const auto outcome = train_judge(data, ocfg, ccfg);
        Trial t;
        t.index = i;
        t.config = c;
        t.val_accuracy = outcome.clf.best_val_accuracy;
        t.val_loss = outcome.clf.best_val_loss;
        t.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        spdlog::info("search: trial {} acc={:.4f} loss={:.4f}", i, t.val_accuracy, t.val_loss);
        if (sink) sink(t);
        result.ranked.push_back(t);
    }
    std::stable_sort(result.ranked.begin(), result.ranked.end(), [](const Trial& a, const Trial& b) {
        if (a.val_accuracy != b.val_accuracy) return a.val_accuracy > b.val_accuracy;
        if (a.val_loss != b.val_loss) return a.val_loss < b.val_loss;
        return a.index < b.index;
    });
    return result;
}

nlohmann::ordered_json to_json(const Trial& t) {
    nlohmann::ordered_json j;
    j["trial"] = t.index;
    j["odl_lr"] = t.config.odl_lr;
    j["odl_batch"] = t.config.odl_batch;
    j["scale_init"] = t.config.scale;
    j["dropout"] = t.config.dropout;
    j["clf_lr"] = t.config.clf_lr;
    j["clf_batch"] = t.config.clf_batch;
    j["val_accuracy"] = t.val_accuracy;
    j["val_loss"] = t.val_loss;
    j["wall_seconds"] = t.wall_seconds;
    return j;
}

std::vector<SensitivityRow> sensitivity(const std::vector<Trial>& trials) {
    using Getter = double (*)(const TrialConfig&);
    const std::array<std::pair<const char*, Getter>, 6> params{{
        {"odl_lr", [](const TrialConfig& c) { return c.odl_lr; }},
        {"odl_batch", [](const TrialConfig& c) { return static_cast<double>(c.odl_batch); }},
        {"scale_init", [](const TrialConfig& c) { return c.scale; }},
        {"dropout", [](const TrialConfig& c) { return c.dropout; }},
        {"clf_lr", [](const TrialConfig& c) { return c.clf_lr; }},
        {"clf_batch", [](const TrialConfig& c) { return static_cast<double>(c.clf_batch); }},
    }};
    std::vector<SensitivityRow> rows;
    for (const auto& [name, get] : params) {
        std::map<double, std::vector<double>> groups;
        for (const auto& t : trials) groups[get(t.config)].push_back(t.val_accuracy);
        for (const auto& [value, accs] : groups) {
            SensitivityRow r;
            r.parameter = name;
            r.value = value;
            r.n = accs.size();
            double sum = 0.0;
            for (double a : accs) sum += a;
            r.mean = sum / static_cast<double>(r.n);
            if (r.n > 1) {
                double ss = 0.0;
                for (double a : accs) ss += (a - r.mean) * (a - r.mean);
                r.sem = std::sqrt(ss / static_cast<double>(r.n - 1)) / std::sqrt(static_cast<double>(r.n));
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::string format_sensitivity(const std::vector<SensitivityRow>& rows) {
    std::string out = fmt::format("{:<12} {:>10} {:>8} {:>8} {:>4}\n", "parameter", "value", "mean",
                                  "sem", "n");
    for (const auto& r : rows) {
        out += fmt::format("{:<12} {:>10g} {:>8.4f} {:>8.4f} {:>4}\n", r.parameter, r.value, r.mean,
                           r.sem, r.n);
    }
    return out;
}

} // namespace lj
