// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The assembled judge: frozen ordinal layer feeding the linear classifier,
// and the two-stage training that produces it.

#include <vector>

#include "likeness/attribution.hpp"
#include "likeness/classifier.hpp"
#include "likeness/eval.hpp"
#include "likeness/odl.hpp"

namespace lj {

struct Judge {
    OdlParams odl;
    ClfParams clf;

    std::vector<double> latent(const EmbeddingPair& e) const { return latent_scores(e, odl); }
    Decision decide(const EmbeddingPair& e) const;
    std::vector<int> levels(const EmbeddingPair& e) const;
};

struct TrainOutcome {
    Judge judge;
    OdlTrainResult odl;
    ClfTrainResult clf;
};

/// Stage one fits the ordinal layer on rated train/val examples; stage two
/// freezes it and fits the classifier on every labeled train/val example.
TrainOutcome train_judge(const Dataset& data, const OdlConfig& odl_cfg, const ClfConfig& clf_cfg);

/// Classifier samples for a split, using inference-path latent scores.
/// The returned storage owns the z vectors referenced by the samples.
struct LatentSet {
    std::vector<std::vector<double>> z;
    std::vector<ClfSample> samples;
};
LatentSet latent_set(const Dataset& data, Split split, const OdlParams& odl);

/// Metrics for one split. Fine-grained accuracy covers rated examples only;
/// success rates are keyed "<source>/<language>" and by source alone.
EvalReport evaluate(const Judge& judge, const Dataset& data, Split split,
                    double trend_bin_seconds = 5.0);

} // namespace lj
