// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "likeness/error.hpp"

namespace lj {

void RunConfig::propagate_seed() {
    odl.seed = seed;
    clf.seed = seed;
    synth.seed = seed;
    search.seed = seed;
}

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, std::string_view where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ValidationError(fmt::format("config: '{}' must be an object", where));
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items()) {
        if (!allowed.contains(k)) {
            throw ValidationError(fmt::format("config: unknown key '{}' in '{}'", k, where));
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(fmt::format("config: bad value for '{}'", key));
    }
}

void read_path(const json& j, const char* key, std::filesystem::path& dst) {
    std::string s;
    if (!j.contains(key)) return;
    read(j, key, s);
    dst = s;
}

} // namespace

RunConfig parse_run_config(const json& j) {
    reject_unknown(j, "<root>",
                   {"embeddings", "labels", "checkpoint", "out", "seed", "odl", "classifier",
                    "synth", "search"});
    RunConfig c;
    read_path(j, "embeddings", c.embeddings);
    read_path(j, "labels", c.labels);
    read_path(j, "checkpoint", c.checkpoint);
    read_path(j, "out", c.out);
    read(j, "seed", c.seed);

    if (j.contains("odl")) {
        const auto& o = j["odl"];
        reject_unknown(o, "odl",
                       {"dims", "levels", "dropout", "lr", "batch_size", "scale_init", "max_epochs",
                        "patience", "readout"});
        read(o, "dims", c.odl.dims);
        read(o, "levels", c.odl.levels);
        read(o, "dropout", c.odl.dropout);
        read(o, "lr", c.odl.lr);
        read(o, "batch_size", c.odl.batch_size);
        read(o, "scale_init", c.odl.scale_init);
        read(o, "max_epochs", c.odl.max_epochs);
        read(o, "patience", c.odl.patience);
        if (o.contains("readout")) {
            std::string m;
            read(o, "readout", m);
            c.odl.readout = parse_readout(m);
        }
    }
    if (j.contains("classifier")) {
        const auto& o = j["classifier"];
        reject_unknown(o, "classifier",
                       {"lambda", "lr", "batch_size", "max_epochs", "patience", "use_bias"});
        read(o, "lambda", c.clf.lambda);
        read(o, "lr", c.clf.lr);
        read(o, "batch_size", c.clf.batch_size);
        read(o, "max_epochs", c.clf.max_epochs);
        read(o, "patience", c.clf.patience);
        read(o, "use_bias", c.clf.use_bias);
    }
    if (j.contains("synth")) {
        const auto& o = j["synth"];
        reject_unknown(o, "synth",
                       {"d", "n_train", "n_val", "n_test", "spread", "class_margin", "noise_std",
                        "source_noise"});
        read(o, "d", c.synth.d);
        read(o, "n_train", c.synth.n_train);
        read(o, "n_val", c.synth.n_val);
        read(o, "n_test", c.synth.n_test);
        read(o, "spread", c.synth.spread);
        read(o, "class_margin", c.synth.class_margin);
        read(o, "noise_std", c.synth.noise_std);
        read(o, "source_noise", c.synth.source_noise);
    }
    if (j.contains("search")) {
        const auto& o = j["search"];
        reject_unknown(o, "search",
                       {"odl_lr", "odl_batch", "scale_min", "scale_max", "scale_step", "dropout",
                        "clf_lr", "clf_batch", "budget", "strategy"});
        read(o, "odl_lr", c.search.odl_lr);
        read(o, "odl_batch", c.search.odl_batch);
        read(o, "scale_min", c.search.scale_min);
        read(o, "scale_max", c.search.scale_max);
        read(o, "scale_step", c.search.scale_step);
        read(o, "dropout", c.search.dropout);
        read(o, "clf_lr", c.search.clf_lr);
        read(o, "clf_batch", c.search.clf_batch);
        read(o, "budget", c.search.budget);
        if (o.contains("strategy")) {
            std::string s;
            read(o, "strategy", s);
            if (s == "grid") {
                c.search.strategy = SearchStrategy::grid;
            } else if (s == "uniform_random" || s == "random") {
                c.search.strategy = SearchStrategy::uniform_random;
            } else {
                throw ValidationError(fmt::format("config: unknown search strategy '{}'", s));
            }
        }
    }
    c.synth.dims = c.odl.dims;
    c.synth.levels = c.odl.levels;
    c.propagate_seed();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open config '{}'", path.string()));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(fmt::format("config '{}': {}", path.string(), e.what()));
    }
    return parse_run_config(j);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["embeddings"] = c.embeddings.string();
    j["labels"] = c.labels.string();
    j["checkpoint"] = c.checkpoint.string();
    j["out"] = c.out.string();
    j["seed"] = c.seed;
    j["odl"] = {{"dims", c.odl.dims},
                {"levels", c.odl.levels},
                {"dropout", c.odl.dropout},
                {"lr", c.odl.lr},
                {"batch_size", c.odl.batch_size},
                {"scale_init", c.odl.scale_init},
                {"max_epochs", c.odl.max_epochs},
                {"patience", c.odl.patience},
                {"readout", std::string(to_string(c.odl.readout))}};
    j["classifier"] = {{"lambda", c.clf.lambda},         {"lr", c.clf.lr},
                       {"batch_size", c.clf.batch_size}, {"max_epochs", c.clf.max_epochs},
                       {"patience", c.clf.patience},     {"use_bias", c.clf.use_bias}};
    j["synth"] = {{"d", c.synth.d},
                  {"n_train", c.synth.n_train},
                  {"n_val", c.synth.n_val},
                  {"n_test", c.synth.n_test},
                  {"spread", c.synth.spread},
                  {"class_margin", c.synth.class_margin},
                  {"noise_std", c.synth.noise_std},
                  {"source_noise", c.synth.source_noise}};
    j["search"] = {{"odl_lr", c.search.odl_lr},
                   {"odl_batch", c.search.odl_batch},
                   {"scale_min", c.search.scale_min},
                   {"scale_max", c.search.scale_max},
                   {"scale_step", c.search.scale_step},
                   {"dropout", c.search.dropout},
                   {"clf_lr", c.search.clf_lr},
                   {"clf_batch", c.search.clf_batch},
                   {"budget", c.search.budget},
                   {"strategy", c.search.strategy == SearchStrategy::grid ? "grid" : "uniform_random"}};
    return j;
}

} // namespace lj
