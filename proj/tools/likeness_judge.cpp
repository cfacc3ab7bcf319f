// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
//
// likeness_judge: synth, train, score, judge, eval, search, inspect.
// Exit status: 0 ok, 1 invalid input or config, 2 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "likeness/attribution.hpp"
#include "likeness/checkpoint.hpp"
#include "likeness/config.hpp"
#include "likeness/datamodel.hpp"
#include "likeness/error.hpp"
#include "likeness/judge.hpp"
#include "likeness/registry.hpp"
#include "likeness/search.hpp"
#include "likeness/synth.hpp"

namespace fs = std::filesystem;
using namespace lj;

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> embeddings, labels, checkpoint, out, readout;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda, scale_init, lr_odl, lr_clf, dropout;
    std::optional<std::size_t> batch_odl, batch_clf;
    // command-specific
    std::string split = "test";
    std::optional<std::string> id;
    std::optional<std::size_t> budget;
    std::optional<std::string> strategy;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run config; flags override its fields");
    cmd->add_option("--embeddings", f.embeddings, "embeddings JSONL");
    cmd->add_option("--labels", f.labels, "labels JSONL");
    cmd->add_option("--checkpoint", f.checkpoint, "checkpoint path (written by train, read otherwise)");
    cmd->add_option("--out", f.out, "output directory (or file, for score/judge)");
    cmd->add_option("--seed", f.seed, "seed for every random draw");
    cmd->add_option("--readout", f.readout, "mean, last or fused")
        ->check(CLI::IsMember({"mean", "last", "fused"}));
    cmd->add_option("--lambda", f.lambda, "symmetry regularizer weight");
    cmd->add_option("--scale-init", f.scale_init, "initial cut-point scale");
    cmd->add_option("--lr-odl", f.lr_odl, "ordinal layer learning rate");
    cmd->add_option("--lr-clf", f.lr_clf, "classifier learning rate");
    cmd->add_option("--batch-odl", f.batch_odl, "ordinal layer batch size");
    cmd->add_option("--batch-clf", f.batch_clf, "classifier batch size");
    cmd->add_option("--dropout", f.dropout, "dropout on the readout");
}

RunConfig resolve(const Flags& f) {
    RunConfig c = f.config.empty() ? parse_run_config(nlohmann::json::object())
                                   : load_run_config(f.config);
    if (f.embeddings) c.embeddings = *f.embeddings;
    if (f.labels) c.labels = *f.labels;
    if (f.checkpoint) c.checkpoint = *f.checkpoint;
    if (f.out) c.out = *f.out;
    if (f.seed) c.seed = *f.seed;
    if (f.readout) c.odl.readout = parse_readout(*f.readout);
    if (f.lambda) c.clf.lambda = *f.lambda;
    if (f.scale_init) c.odl.scale_init = *f.scale_init;
    if (f.lr_odl) c.odl.lr = *f.lr_odl;
    if (f.lr_clf) c.clf.lr = *f.lr_clf;
    if (f.batch_odl) c.odl.batch_size = *f.batch_odl;
    if (f.batch_clf) c.clf.batch_size = *f.batch_clf;
    if (f.dropout) c.odl.dropout = *f.dropout;
    if (f.budget) c.search.budget = *f.budget;
    if (f.strategy) {
        if (*f.strategy == "grid") {
            c.search.strategy = SearchStrategy::grid;
        } else if (*f.strategy == "uniform_random" || *f.strategy == "random") {
            c.search.strategy = SearchStrategy::uniform_random;
        } else {
            throw ValidationError(fmt::format("unknown search strategy '{}'", *f.strategy));
        }
    }
    c.propagate_seed();
    return c;
}

const fs::path& require(const fs::path& p, std::string_view flag, bool must_exist = true) {
    if (p.empty()) throw ValidationError(fmt::format("missing required {}", flag));
    if (must_exist && !fs::exists(p)) {
        throw ValidationError(fmt::format("{}: '{}' does not exist", flag, p.string()));
    }
    return p;
}

void report_warnings(const Warnings& w, std::string_view what) {
    for (const auto& msg : w) spdlog::warn("{}: {}", what, msg);
}

std::vector<EmbeddingPair> read_embeddings(const RunConfig& c) {
    Warnings w;
    auto e = load_embeddings(require(c.embeddings, "--embeddings"), &w);
    report_warnings(w, c.embeddings.string());
    return e;
}

Dataset read_dataset(const RunConfig& c, int levels) {
    auto emb = read_embeddings(c);
    Warnings w;
    auto lab = load_labels(require(c.labels, "--labels"), levels, &w);
    report_warnings(w, c.labels.string());
    AssembleSummary summary;
    return assemble(std::move(emb), std::move(lab), levels, &summary);
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure(fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out) throw RuntimeFailure(fmt::format("write failed for '{}'", path.string()));
}

// Summary lines are "<command> ok key=value ...", always the last stdout line.
void summary(std::string_view cmd, const std::string& fields) {
    std::cout << cmd << " ok " << fields << '\n' << std::flush;
}

std::string fixed(double x) { return fmt::format("{:.6f}", x); }

void cmd_synth(const RunConfig& c) {
    const auto& out = require(c.out, "--out", false);
    const auto data = generate(c.synth);
    write_synth(out, data);
    summary("synth", fmt::format("out={} n={} bayes_level_accuracy={} bayes_binary_accuracy={}",
                                 out.string(), data.labels.size(),
                                 fixed(data.truth.bayes_level_accuracy),
                                 fixed(data.truth.bayes_binary_accuracy)));
}

void cmd_train(const RunConfig& c) {
    const auto& ckpt = require(c.checkpoint, "--checkpoint", false);
    const Dataset data = read_dataset(c, c.odl.levels);
    const auto outcome = train_judge(data, c.odl, c.clf);
    save_checkpoint(ckpt, outcome.judge);
    if (!c.out.empty()) {
        std::string log;
        for (const auto& e : outcome.odl.log) {
            nlohmann::ordered_json j{{"stage", "odl"},
                                     {"epoch", e.epoch},
                                     {"train_loss", e.train_loss},
                                     {"val_loss", e.val_loss}};
            log += j.dump() + '\n';
        }
        for (const auto& e : outcome.clf.log) {
            nlohmann::ordered_json j{{"stage", "classifier"},
                                     {"epoch", e.epoch},
                                     {"train_loss", e.train_loss},
                                     {"val_loss", e.val_loss},
                                     {"val_accuracy", e.val_accuracy}};
            log += j.dump() + '\n';
        }
        write_file(c.out / "train_log.jsonl", log);
    }
    summary("train",
            fmt::format("checkpoint={} odl_best_epoch={} odl_val_nll={} clf_best_epoch={} "
                        "val_accuracy={} sym_reg={}",
                        ckpt.string(), outcome.odl.best_epoch, fixed(outcome.odl.best_val_loss),
                        outcome.clf.best_epoch, fixed(outcome.clf.best_val_accuracy),
                        fmt::format("{:.6g}", sym_reg(outcome.judge.clf))));
}

void cmd_score(const RunConfig& c) {
    const Judge j = load_checkpoint(require(c.checkpoint, "--checkpoint"));
    const auto emb = read_embeddings(c);
    std::string text;
    for (const auto& e : emb) {
        const auto z = j.latent(e);
        nlohmann::ordered_json rec;
        rec["id"] = e.id;
        rec["z"] = z;
        rec["levels"] = predict_levels(distribution(z, j.odl));
        text += rec.dump() + '\n';
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        write_file(c.out, text);
    }
    summary("score", fmt::format("n={}", emb.size()));
}

void cmd_judge(const RunConfig& c, const std::optional<std::string>& only) {
    const Judge j = load_checkpoint(require(c.checkpoint, "--checkpoint"));
    const auto emb = read_embeddings(c);
    const auto& reg = DimensionRegistry::standard();
    std::string jsonl;
    std::string tables;
    std::size_t n = 0;
    std::size_t machine = 0;
    for (const auto& e : emb) {
        if (only && e.id != *only) continue;
        const auto report = explain(e.id, j.latent(e), j.clf);
        jsonl += to_json(report, reg).dump() + '\n';
        tables += format_table(report, reg) + '\n';
        ++n;
        machine += report.decision == Label::machine ? 1 : 0;
    }
    if (only && n == 0) throw ValidationError(fmt::format("no embedding with id '{}'", *only));
    if (c.out.empty()) {
        std::cout << jsonl;
    } else {
        write_file(c.out / "judgments.jsonl", jsonl);
        write_file(c.out / "judgments.txt", tables);
    }
    summary("judge", fmt::format("n={} machine={} human={}", n, machine, n - machine));
}

void cmd_eval(const RunConfig& c, const std::string& split_name) {
    const Judge j = load_checkpoint(require(c.checkpoint, "--checkpoint"));
    const auto& out = require(c.out, "--out", false);
    const Split split = parse_split(split_name);
    const Dataset data = read_dataset(c, j.odl.levels);
    const auto report = evaluate(j, data, split);
    const auto& reg = DimensionRegistry::standard();
    write_file(out / "report.json", to_json(report, reg).dump(2) + '\n');
    write_file(out / "report.txt", format_tables(report, reg));
    std::string fields = fmt::format("split={} n={} accuracy={}", split_name,
                                     report.accuracy.total, fixed(report.accuracy.overall));
    if (report.roc_auc) fields += fmt::format(" roc_auc={}", fixed(*report.roc_auc));
    if (report.fine_grained) {
        fields += fmt::format(" level_exact={}", fixed(report.fine_grained->overall.exact));
    }
    summary("eval", fields);
}

void cmd_search(const RunConfig& c) {
    const auto& out = require(c.out, "--out", false);
    const Dataset data = read_dataset(c, c.odl.levels);
    fs::create_directories(out);
    std::ofstream log(out / "trials.jsonl", std::ios::binary | std::ios::trunc);
    if (!log) throw RuntimeFailure(fmt::format("cannot write '{}'", (out / "trials.jsonl").string()));
    const auto result = run_search(c.search, data, c.odl, c.clf, [&log](const Trial& t) {
        log << to_json(t).dump() << '\n' << std::flush;
    });
    nlohmann::ordered_json ranked = nlohmann::ordered_json::array();
    for (const auto& t : result.ranked) {
        auto j = to_json(t);
        j.erase("wall_seconds");
        ranked.push_back(j);
    }
    write_file(out / "ranking.json", ranked.dump(2) + '\n');
    write_file(out / "sensitivity.txt", format_sensitivity(sensitivity(result.ranked)));
    const auto& best = result.ranked.front();
    summary("search", fmt::format("trials={} clamped={} best_trial={} best_val_accuracy={}",
                                  result.ranked.size(), result.budget_clamped ? 1 : 0, best.index,
                                  fixed(best.val_accuracy)));
}

void cmd_inspect(const RunConfig& c) {
    const auto& path = require(c.checkpoint, "--checkpoint");
    const Judge j = load_checkpoint(path);
    const auto& reg = DimensionRegistry::standard();
    std::cout << fmt::format("checkpoint  {}\n", path.string());
    std::cout << fmt::format("d={} K={} r={} readout={}\n", j.odl.input, j.odl.dims, j.odl.levels,
                             to_string(j.odl.readout.mode));
    if (j.odl.readout.mode == ReadoutMode::fused) {
        const auto a = j.odl.readout.fusion.coefficients();
        std::cout << fmt::format("fusion alpha_first={:.6f} alpha_last={:.6f}\n", a.first, a.second);
    }
    const auto w = attribution_weights(j.clf, WeightSource::difference);
    std::cout << fmt::format("{:<4} {:<34} {:>8} {:>10}\n", "dim", "name", "scale", "w_diff");
    for (std::size_t k = 0; k < j.odl.dims; ++k) {
        const std::string name = k < reg.size() ? std::string(reg.at(k).name) : fmt::format("dim{}", k);
        std::cout << fmt::format("{:<4} {:<34} {:>8.4f} {:>10.4f}\n", k, name, j.odl.scale(k), w[k]);
    }
    summary("inspect", fmt::format("d={} K={} r={} readout={} sym_reg={:.6g}", j.odl.input,
                                   j.odl.dims, j.odl.levels, to_string(j.odl.readout.mode),
                                   sym_reg(j.clf)));
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("likeness_judge");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::info);
    if (const char* lvl = std::getenv("LIKENESS_JUDGE_LOG")) {
        const auto parsed = spdlog::level::from_str(lvl);
        // from_str maps unknown names to "off"; only accept it when asked for.
        if (parsed != spdlog::level::off || std::string_view(lvl) == "off") {
            spdlog::set_level(parsed);
        } else {
            spdlog::warn("ignoring unknown LIKENESS_JUDGE_LOG level '{}'", lvl);
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"likeness_judge: interpretable human-likeness judge for spoken dialogue"};
    app.require_subcommand(1);
    Flags f;

    auto* synth = app.add_subcommand("synth", "write a synthetic dataset with a planted judge");
    auto* train = app.add_subcommand("train", "fit ordinal layer then classifier, write a checkpoint");
    auto* score = app.add_subcommand("score", "per-dialogue latent scores and levels");
    auto* judge = app.add_subcommand("judge", "label, probability and top-8 attribution");
    auto* eval = app.add_subcommand("eval", "metrics report against labels");
    auto* search = app.add_subcommand("search", "hyperparameter search");
    auto* inspect = app.add_subcommand("inspect", "checkpoint summary");
    for (auto* cmd : {synth, train, score, judge, eval, search, inspect}) add_common(cmd, f);
    judge->add_option("--id", f.id, "judge only this dialogue");
    eval->add_option("--split", f.split, "train, val or test")
        ->check(CLI::IsMember({"train", "val", "test"}));
    search->add_option("--budget", f.budget, "number of trials");
    search->add_option("--strategy", f.strategy, "grid or uniform_random");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const RunConfig c = resolve(f);
        if (*synth) cmd_synth(c);
        else if (*train) cmd_train(c);
        else if (*score) cmd_score(c);
        else if (*judge) cmd_judge(c, f.id);
        else if (*eval) cmd_eval(c, f.split);
        else if (*search) cmd_search(c);
        else if (*inspect) cmd_inspect(c);
    } catch (const ValidationError& e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const RuntimeFailure& e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 2;
    }
    return 0;
}
