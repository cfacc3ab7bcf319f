// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

#include "likeness/error.hpp"

namespace lj {

SourceAccuracy binary_accuracy(std::span<const Label> preds, std::span<const Label> labels,
                               std::span<const Source> sources) {
    if (preds.size() != labels.size() || preds.size() != sources.size()) {
        throw ValidationError("binary_accuracy: inputs differ in length");
    }
    SourceAccuracy out;
    std::map<Source, std::size_t> hits;
    std::size_t total_hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool hit = preds[i] == labels[i];
        ++out.counts[sources[i]];
        hits[sources[i]] += hit ? 1 : 0;
        total_hits += hit ? 1 : 0;
    }
    for (const auto& [src, n] : out.counts) {
        out.by_source[src] = static_cast<double>(hits[src]) / static_cast<double>(n);
    }
    out.total = preds.size();
    out.overall = out.total ? static_cast<double>(total_hits) / static_cast<double>(out.total) : 0.0;
    return out;
}

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) throw ValidationError("roc_auc: inputs differ in length");
    const auto n_pos = static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), Label::machine));
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw ValidationError("roc_auc: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
    // Rank sum of the positives with tied scores sharing their average rank.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t t = i; t <= j; ++t) {
            if (labels[order[t]] == Label::machine) rank_sum += avg_rank;
        }
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

int level_group(int level, int levels) {
    if (level < 1 || level > levels) {
        throw ValidationError(fmt::format("level {} outside [1, {}]", level, levels));
    }
    // Doubled comparison keeps the midpoint exact: 2*level vs levels + 1.
    const int twice = 2 * level;
    if (twice < levels + 1) return 0;
    if (twice == levels + 1) return 1;
    return 2;
}

FineGrainedAccuracy fine_grained_accuracy(std::span<const std::vector<int>> pred,
                                          std::span<const std::vector<int>> truth, int levels) {
    if (pred.size() != truth.size()) throw ValidationError("fine_grained_accuracy: size mismatch");
    FineGrainedAccuracy out;
    out.samples = pred.size();
    if (pred.empty()) return out;
    const std::size_t K = truth.front().size();
    struct Counts { std::size_t exact = 0, grouped = 0, nearby = 0; };
    std::vector<Counts> per(K);
    for (std::size_t n = 0; n < pred.size(); ++n) {
        if (pred[n].size() != K || truth[n].size() != K) {
            throw ValidationError("fine_grained_accuracy: ragged level vectors");
        }
        for (std::size_t k = 0; k < K; ++k) {
            const int p = pred[n][k];
            const int t = truth[n][k];
            per[k].exact += p == t ? 1 : 0;
            per[k].grouped += level_group(p, levels) == level_group(t, levels) ? 1 : 0;
            per[k].nearby += std::abs(p - t) <= 1 ? 1 : 0;
        }
    }
    Counts all;
    const double n = static_cast<double>(pred.size());
    for (const auto& c : per) {
        out.per_dim.push_back({static_cast<double>(c.exact) / n, static_cast<double>(c.grouped) / n,
                               static_cast<double>(c.nearby) / n});
        all.exact += c.exact;
        all.grouped += c.grouped;
        all.nearby += c.nearby;
    }
    const double total = n * static_cast<double>(K);
    out.overall = {static_cast<double>(all.exact) / total, static_cast<double>(all.grouped) / total,
                   static_cast<double>(all.nearby) / total};
    return out;
}

std::map<std::string, SuccessRate> success_rate(std::span<const Judgment> judgments) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
    for (const auto& j : judgments) {
        auto& [human, trials] = tally[j.system];
        human += j.judged_human ? 1 : 0;
        ++trials;
    }
    std::map<std::string, SuccessRate> out;
    for (const auto& [system, t] : tally) {
        const double rate = static_cast<double>(t.first) / static_cast<double>(t.second);
        out[system] = {rate, t.second, rate > 0.5};
    }
    return out;
}

TrendResult cochran_armitage(std::span<const TrendBin> bins) {
    if (bins.size() < 2) throw ValidationError("cochran_armitage: need at least two bins");
    double n_total = 0.0;
    double y_total = 0.0;
    for (const auto& b : bins) {
        if (b.y > b.n) throw ValidationError("cochran_armitage: successes exceed trials");
        n_total += static_cast<double>(b.n);
        y_total += static_cast<double>(b.y);
    }
    if (n_total <= 0.0) throw ValidationError("cochran_armitage: no observations");
    const double pbar = y_total / n_total;
    if (pbar <= 0.0 || pbar >= 1.0) {
        throw ValidationError("cochran_armitage: pooled proportion is 0 or 1, statistic undefined");
    }
    double num = 0.0;
    double snt2 = 0.0;
    double snt = 0.0;
    for (const auto& b : bins) {
        const double n = static_cast<double>(b.n);
        num += b.score * (static_cast<double>(b.y) - n * pbar);
        snt2 += n * b.score * b.score;
        snt += n * b.score;
    }
    const double var = pbar * (1.0 - pbar) * (snt2 - snt * snt / n_total);
    if (!(var > 0.0)) throw ValidationError("cochran_armitage: scores carry no spread");
    const double z = num / std::sqrt(var);
    return {z, std::erfc(std::abs(z) / std::sqrt(2.0))};
}

namespace {

nlohmann::ordered_json level_json(const LevelAccuracy& a) {
    nlohmann::ordered_json j;
    j["exact"] = a.exact;
    j["grouped"] = a.grouped;
    j["nearby"] = a.nearby;
    return j;
}

std::string cell(const std::map<Source, double>& m, Source s) {
    auto it = m.find(s);
    return it == m.end() ? std::string("--") : fmt::format("{:.4f}", it->second);
}

} // namespace

nlohmann::ordered_json to_json(const EvalReport& r, const DimensionRegistry& reg) {
    nlohmann::ordered_json j;
    j["split"] = r.split;
    nlohmann::ordered_json acc;
    for (const auto& [src, v] : r.accuracy.by_source) {
        acc[std::string(to_string(src))] = {{"accuracy", v}, {"count", r.accuracy.counts.at(src)}};
    }
    j["accuracy_by_source"] = acc.is_null() ? nlohmann::ordered_json::object() : acc;
    j["overall_accuracy"] = r.accuracy.overall;
    j["count"] = r.accuracy.total;
    j["roc_auc"] = r.roc_auc ? nlohmann::ordered_json(*r.roc_auc) : nlohmann::ordered_json();
    if (r.fine_grained) {
        nlohmann::ordered_json fg;
        fg["samples"] = r.fine_grained->samples;
        fg["overall"] = level_json(r.fine_grained->overall);
        auto dims = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < r.fine_grained->per_dim.size(); ++k) {
            auto d = level_json(r.fine_grained->per_dim[k]);
            d["dim"] = k;
            if (k < reg.size()) d["code"] = reg.at(k).code;
            dims.push_back(std::move(d));
        }
        fg["per_dimension"] = std::move(dims);
        j["fine_grained"] = std::move(fg);
    } else {
        j["fine_grained"] = nullptr;
    }
    nlohmann::ordered_json sr = nlohmann::ordered_json::object();
    for (const auto& [sys, s] : r.success_rate_by_system) {
        sr[sys] = {{"rate", s.rate}, {"trials", s.trials}, {"above_chance", s.above_chance}};
    }
    j["success_rate"] = std::move(sr);
    auto trends = nlohmann::ordered_json::array();
    for (const auto& t : r.trend_tests) {
        nlohmann::ordered_json tj;
        tj["group"] = t.group;
        auto bins = nlohmann::ordered_json::array();
        for (const auto& b : t.bins) bins.push_back({{"n", b.n}, {"y", b.y}, {"score", b.score}});
        tj["bins"] = std::move(bins);
        tj["z"] = t.result.z;
        tj["p"] = t.result.p;
        trends.push_back(std::move(tj));
    }
    j["trend_tests"] = std::move(trends);
    return j;
}

std::string format_tables(const EvalReport& r, const DimensionRegistry& reg) {
    std::string out = fmt::format("Binary classification accuracy ({} split)\n", r.split);
    out += fmt::format("{:<14}{:>14}{:>14}{:>14}{:>10}\n", "", "Human-Human", "Human-Machine",
                       "Pseudo Human", "Overall");
    out += fmt::format("{:<14}{:>14}{:>14}{:>14}{:>10.4f}\n", "Accuracy",
                       cell(r.accuracy.by_source, Source::HH), cell(r.accuracy.by_source, Source::HM),
                       cell(r.accuracy.by_source, Source::PH), r.accuracy.overall);
    out += fmt::format("ROC-AUC: {}\n", r.roc_auc ? fmt::format("{:.4f}", *r.roc_auc) : "--");

    if (r.fine_grained) {
        const auto& fg = *r.fine_grained;
        out += fmt::format("\nFine-grained scoring accuracy ({} rated samples)\n", fg.samples);
        out += fmt::format("{:<12}", "Metric\\Dim");
        for (std::size_t k = 0; k < fg.per_dim.size(); ++k) {
            out += fmt::format("{:>8}", k < reg.size() ? reg.at(k).code : std::string_view("?"));
        }
        out += fmt::format("{:>9}\n", "All");
        auto row = [&](std::string_view name, double LevelAccuracy::*field) {
            std::string s = fmt::format("{:<12}", name);
            for (const auto& a : fg.per_dim) s += fmt::format("{:>8.4f}", a.*field);
            s += fmt::format("{:>9.4f}\n", fg.overall.*field);
            return s;
        };
        out += row("Exact", &LevelAccuracy::exact);
        out += row("Group", &LevelAccuracy::grouped);
        out += row("Nearby", &LevelAccuracy::nearby);
    }

    if (!r.success_rate_by_system.empty()) {
        out += "\nSuccess rate (judged human)\n";
        out += fmt::format("{:<16}{:>10}{:>8}{:>8}\n", "System", "Rate", "Trials", ">0.5");
        for (const auto& [sys, s] : r.success_rate_by_system) {
            out += fmt::format("{:<16}{:>10.4f}{:>8}{:>8}\n", sys, s.rate, s.trials,
                               s.above_chance ? "yes" : "no");
        }
    }

    if (!r.trend_tests.empty()) {
        out += "\nCochran-Armitage trend tests (accuracy vs. dialogue length)\n";
        out += fmt::format("{:<10}{:>12}{:>12}{:>8}\n", "Group", "Z", "p-value", "Bins");
        for (const auto& t : r.trend_tests) {
            out += fmt::format("{:<10}{:>12.4f}{:>12.5f}{:>8}\n", t.group, t.result.z, t.result.p,
                               t.bins.size());
        }
    }
    return out;
}

} // namespace lj
