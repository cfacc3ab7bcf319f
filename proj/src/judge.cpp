// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/judge.hpp"

#include <cmath>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "likeness/error.hpp"

namespace lj {

Decision Judge::decide(const EmbeddingPair& e) const { return classify(latent(e), clf); }

std::vector<int> Judge::levels(const EmbeddingPair& e) const {
    return predict_levels(distribution(latent(e), odl));
}

LatentSet latent_set(const Dataset& data, Split split, const OdlParams& odl) {
    LatentSet out;
    const auto examples = data.split(split);
    out.z.reserve(examples.size());
    for (const auto* ex : examples) out.z.push_back(latent_scores(data.embedding(ex->id), odl));
    out.samples.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        out.samples.push_back({out.z[i], examples[i]->label});
    }
    return out;
}

TrainOutcome train_judge(const Dataset& data, const OdlConfig& odl_cfg, const ClfConfig& clf_cfg) {
    TrainOutcome out;
    out.odl = train_odl(data, odl_cfg);
    // The ordinal layer is frozen from here on; the classifier sees
    // inference-path scores only.
    const auto train = latent_set(data, Split::train, out.odl.params);
    const auto val = latent_set(data, Split::val, out.odl.params);
    out.clf = train_clf(train.samples, val.samples, clf_cfg);
    out.judge = {out.odl.params, out.clf.params};
    return out;
}

EvalReport evaluate(const Judge& judge, const Dataset& data, Split split,
                    double trend_bin_seconds) {
    EvalReport report;
    report.split = std::string(to_string(split));
    const auto examples = data.split(split);

    std::vector<Label> preds;
    std::vector<Label> labels;
    std::vector<Source> sources;
    std::vector<double> scores;
    std::vector<std::vector<int>> pred_levels;
    std::vector<std::vector<int>> true_levels;
    std::vector<Judgment> judgments;
    // source -> duration bin -> (n, correct)
    std::map<Source, std::map<long long, std::pair<std::size_t, std::size_t>>> by_length;

    for (const auto* ex : examples) {
        const auto z = judge.latent(data.embedding(ex->id));
        const auto d = classify(z, judge.clf);
        preds.push_back(d.label);
        labels.push_back(ex->label);
        sources.push_back(ex->source);
        scores.push_back(d.prob_machine);
        if (ex->ratings) {
            pred_levels.push_back(predict_levels(distribution(z, judge.odl)));
            true_levels.push_back(*ex->ratings);
        }
        const bool judged_human = d.label == Label::human;
        judgments.push_back({std::string(to_string(ex->source)), judged_human});
        judgments.push_back({fmt::format("{}/{}", to_string(ex->source), to_string(ex->language)),
                             judged_human});
        if (ex->duration && trend_bin_seconds > 0.0) {
            const auto bin = static_cast<long long>(std::floor(*ex->duration / trend_bin_seconds));
            auto& cell = by_length[ex->source][bin];
            ++cell.first;
            cell.second += d.label == ex->label ? 1 : 0;
        }
    }

    report.accuracy = binary_accuracy(preds, labels, sources);
    try {
        report.roc_auc = roc_auc(scores, labels);
    } catch (const ValidationError&) {
        spdlog::info("evaluate: ROC-AUC undefined on the {} split (single class)", report.split);
    }
    if (!pred_levels.empty()) {
        report.fine_grained = fine_grained_accuracy(pred_levels, true_levels, data.levels());
    }
    report.success_rate_by_system = success_rate(judgments);

    for (const auto& [source, bins] : by_length) {
        TrendTest t;
        t.group = std::string(to_string(source));
        const long long first = bins.begin()->first;
        for (const auto& [bin, cell] : bins) {
            t.bins.push_back({cell.first, cell.second, static_cast<double>(bin - first + 1)});
        }
        try {
            t.result = cochran_armitage(t.bins);
            report.trend_tests.push_back(std::move(t));
        } catch (const ValidationError& e) {
            spdlog::info("evaluate: trend test skipped for {}: {}", t.group, e.what());
        }
    }
    return report;
}

} // namespace lj
