// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/datamodel.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "base64.hpp"
#include "likeness/error.hpp"
#include "likeness/registry.hpp"

namespace lj {

using nlohmann::json;

namespace {

template <class E, std::size_t N>
E parse_token(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
              std::string_view what) {
    for (const auto& [tok, v] : table) {
        if (tok == s) return v;
    }
    throw ValidationError(fmt::format("unknown {} '{}'", what, s));
}

constexpr std::array<std::pair<std::string_view, Label>, 2> kLabels{
    {{"human", Label::human}, {"machine", Label::machine}}};
constexpr std::array<std::pair<std::string_view, Source>, 3> kSources{
    {{"HH", Source::HH}, {"HM", Source::HM}, {"PH", Source::PH}}};
constexpr std::array<std::pair<std::string_view, Language>, 3> kLanguages{
    {{"zh", Language::zh}, {"en", Language::en}, {"other", Language::other}}};
constexpr std::array<std::pair<std::string_view, Split>, 3> kSplits{
    {{"train", Split::train}, {"val", Split::val}, {"test", Split::test}}};

template <class E, std::size_t N>
std::string_view token_of(E v, const std::array<std::pair<std::string_view, E>, N>& table) {
    for (const auto& [tok, e] : table) {
        if (e == v) return tok;
    }
    return "?";
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure(fmt::format("cannot write '{}'", path.string()));
    return out;
}

// Iterates non-blank lines, handing (line number, parsed object) to fn.
template <class Fn>
void for_each_record(std::istream& in, std::string_view what, Warnings* warnings, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    bool warned_cr = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
            if (warnings && !warned_cr) {
                warnings->push_back(fmt::format("{}: CRLF line ending at line {}", what, lineno));
                warned_cr = true;
            }
        }
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError(fmt::format("{} line {}: malformed record: {}", what, lineno,
                                              e.what()));
        }
        if (!obj.is_object()) {
            throw ValidationError(fmt::format("{} line {}: record is not an object", what, lineno));
        }
        try {
            fn(lineno, obj);
        } catch (const json::exception& e) {
            throw ValidationError(fmt::format("{} line {}: {}", what, lineno, e.what()));
        }
    }
}

void warn_unknown_keys(const json& obj, std::initializer_list<std::string_view> known,
                       std::string_view what, std::size_t lineno, Warnings* warnings) {
    if (!warnings) return;
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) warnings->push_back(fmt::format("{} line {}: unknown key '{}'", what, lineno, key));
    }
}

const json& required(const json& obj, const char* key, std::string_view what, std::size_t lineno) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(fmt::format("{} line {}: missing field '{}'", what, lineno, key));
    }
    return *it;
}

std::string required_string(const json& obj, const char* key, std::string_view what,
                            std::size_t lineno) {
    const auto& v = required(obj, key, what, lineno);
    if (!v.is_string()) {
        throw ValidationError(fmt::format("{} line {}: field '{}' must be a string", what, lineno,
                                          key));
    }
    return v.get<std::string>();
}

} // namespace

std::string_view to_string(Label v) { return token_of(v, kLabels); }
std::string_view to_string(Source v) { return token_of(v, kSources); }
std::string_view to_string(Language v) { return token_of(v, kLanguages); }
std::string_view to_string(Split v) { return token_of(v, kSplits); }

Label parse_label(std::string_view s) { return parse_token(s, kLabels, "label"); }
Source parse_source(std::string_view s) { return parse_token(s, kSources, "source"); }
Language parse_language(std::string_view s) { return parse_token(s, kLanguages, "language"); }
Split parse_split(std::string_view s) { return parse_token(s, kSplits, "split"); }

void check_levels(int levels) {
    if (levels < 3) {
        throw ValidationError(fmt::format("ordinal level count must be >= 3, got {}", levels));
    }
}

std::vector<EmbeddingPair> parse_embeddings(std::istream& in, Warnings* warnings) {
    constexpr std::string_view what = "embeddings";
    std::vector<EmbeddingPair> out;
    std::set<std::string> seen;
    std::size_t common_dim = 0;
    for_each_record(in, what, warnings, [&](std::size_t lineno, const json& obj) {
        warn_unknown_keys(obj, {"id", "dim", "first_mean", "last"}, what, lineno, warnings);
        EmbeddingPair e;
        e.id = required_string(obj, "id", what, lineno);
        const auto& dim_v = required(obj, "dim", what, lineno);
        if (!dim_v.is_number_integer() || dim_v.get<long long>() <= 0) {
            throw ValidationError(
                fmt::format("{} line {}: dim must be a positive integer", what, lineno));
        }
        const auto dim = static_cast<std::size_t>(dim_v.get<long long>());
        for (auto [key, dst] : {std::pair{"first_mean", &e.first_mean}, std::pair{"last", &e.last}}) {
            auto decoded = detail::decode_f32(required_string(obj, key, what, lineno));
            if (!decoded) {
                throw ValidationError(
                    fmt::format("{} line {}: field '{}' is not valid base64 float32", what, lineno,
                                key));
            }
            if (decoded->size() != dim) {
                throw ValidationError(fmt::format("{} line {}: field '{}' holds {} floats, dim is {}",
                                                  what, lineno, key, decoded->size(), dim));
            }
            for (double v : *decoded) {
                if (!std::isfinite(v)) {
                    throw ValidationError(
                        fmt::format("{} line {}: non-finite value in '{}'", what, lineno, key));
                }
            }
            *dst = std::move(*decoded);
        }
        if (common_dim == 0) {
            common_dim = dim;
        } else if (dim != common_dim) {
            throw ValidationError(fmt::format("{} line {}: dim {} differs from earlier dim {}", what,
                                              lineno, dim, common_dim));
        }
        if (!seen.insert(e.id).second) {
            throw ValidationError(fmt::format("{} line {}: duplicate id '{}'", what, lineno, e.id));
        }
        out.push_back(std::move(e));
    });
    return out;
}

std::vector<EmbeddingPair> load_embeddings(const std::filesystem::path& path, Warnings* warnings) {
    auto in = open_input(path);
    return parse_embeddings(in, warnings);
}

void write_embeddings(std::ostream& out, std::span<const EmbeddingPair> pairs) {
    for (const auto& e : pairs) {
        nlohmann::ordered_json obj;
        obj["id"] = e.id;
        obj["dim"] = e.dim();
        obj["first_mean"] = detail::encode_f32(e.first_mean);
        obj["last"] = detail::encode_f32(e.last);
        out << obj.dump() << '\n';
    }
}

void save_embeddings(const std::filesystem::path& path, std::span<const EmbeddingPair> pairs) {
    auto out = open_output(path);
    write_embeddings(out, pairs);
}

void validate_example(const LabeledExample& ex, int levels) {
    check_levels(levels);
    if (ex.id.empty()) throw ValidationError("example with empty id");
    if (ex.ratings) {
        if (ex.ratings->size() != kNumDimensions) {
            throw ValidationError(fmt::format("example '{}': ratings hold {} entries, expected {}",
                                              ex.id, ex.ratings->size(), kNumDimensions));
        }
        for (std::size_t k = 0; k < ex.ratings->size(); ++k) {
            int v = (*ex.ratings)[k];
            if (v < 1 || v > levels) {
                throw ValidationError(fmt::format(
                    "example '{}': rating {} for dimension {} outside [1, {}]", ex.id, v, k, levels));
            }
        }
    }
    if (ex.source == Source::PH && ex.split != Split::test) {
        throw ValidationError(fmt::format(
            "example '{}': pseudo-human dialogues may only appear in the test split", ex.id));
    }
    if (ex.duration && !(std::isfinite(*ex.duration) && *ex.duration >= 0)) {
        throw ValidationError(fmt::format("example '{}': invalid duration", ex.id));
    }
}

std::vector<LabeledExample> parse_labels(std::istream& in, int levels, Warnings* warnings) {
    check_levels(levels);
    constexpr std::string_view what = "labels";
    std::vector<LabeledExample> out;
    std::set<std::string> seen;
    for_each_record(in, what, warnings, [&](std::size_t lineno, const json& obj) {
        warn_unknown_keys(obj, {"id", "label", "source", "language", "split", "ratings", "duration"},
                          what, lineno, warnings);
        LabeledExample ex;
        try {
            ex.id = required_string(obj, "id", what, lineno);
            ex.label = parse_label(required_string(obj, "label", what, lineno));
            ex.source = parse_source(required_string(obj, "source", what, lineno));
            ex.language = parse_language(required_string(obj, "language", what, lineno));
            ex.split = parse_split(required_string(obj, "split", what, lineno));
            if (auto it = obj.find("ratings"); it != obj.end() && !it->is_null()) {
                if (!it->is_array()) throw ValidationError("ratings must be an array");
                std::vector<int> r;
                for (const auto& v : *it) {
                    if (!v.is_number_integer()) throw ValidationError("ratings must be integers");
                    r.push_back(v.get<int>());
                }
                ex.ratings = std::move(r);
            }
            if (auto it = obj.find("duration"); it != obj.end() && !it->is_null()) {
                if (!it->is_number()) throw ValidationError("duration must be a number");
                ex.duration = it->get<double>();
            }
            validate_example(ex, levels);
        } catch (const ValidationError& e) {
            std::string msg = e.what();
            if (msg.rfind(what, 0) == 0) throw;
            throw ValidationError(fmt::format("{} line {}: {}", what, lineno, msg));
        }
        if (!seen.insert(ex.id).second) {
            throw ValidationError(fmt::format("{} line {}: duplicate id '{}'", what, lineno, ex.id));
        }
        out.push_back(std::move(ex));
    });
    return out;
}

std::vector<LabeledExample> load_labels(const std::filesystem::path& path, int levels,
                                        Warnings* warnings) {
    auto in = open_input(path);
    return parse_labels(in, levels, warnings);
}

void write_labels(std::ostream& out, std::span<const LabeledExample> labels) {
    for (const auto& ex : labels) {
        nlohmann::ordered_json obj;
        obj["id"] = ex.id;
        obj["label"] = to_string(ex.label);
        obj["source"] = to_string(ex.source);
        obj["language"] = to_string(ex.language);
        obj["split"] = to_string(ex.split);
        if (ex.ratings) obj["ratings"] = *ex.ratings;
        if (ex.duration) obj["duration"] = *ex.duration;
        out << obj.dump() << '\n';
    }
}

void save_labels(const std::filesystem::path& path, std::span<const LabeledExample> labels) {
    auto out = open_output(path);
    write_labels(out, labels);
}

Dataset::Dataset(std::map<std::string, LabeledExample> examples,
                 std::map<std::string, EmbeddingPair> embeddings, int levels, std::size_t dim)
    : examples_(std::move(examples)), embeddings_(std::move(embeddings)), levels_(levels),
      dim_(dim) {}

const EmbeddingPair& Dataset::embedding(const std::string& id) const {
    auto it = embeddings_.find(id);
    if (it == embeddings_.end()) throw ValidationError(fmt::format("no embedding for '{}'", id));
    return it->second;
}

std::vector<const LabeledExample*> Dataset::split(Split s) const {
    std::vector<const LabeledExample*> out;
    for (const auto& [_, ex] : examples_) {
        if (ex.split == s) out.push_back(&ex);
    }
    return out;
}

std::vector<const LabeledExample*> Dataset::rated(Split s) const {
    std::vector<const LabeledExample*> out;
    for (const auto& [_, ex] : examples_) {
        if (ex.split == s && ex.ratings) out.push_back(&ex);
    }
    return out;
}

Dataset assemble(std::vector<EmbeddingPair> embeddings, std::vector<LabeledExample> labels,
                 int levels, AssembleSummary* summary) {
    check_levels(levels);
    std::map<std::string, EmbeddingPair> emb;
    std::size_t dim = 0;
    for (auto& e : embeddings) {
        if (dim == 0) dim = e.dim();
        if (e.dim() != dim || e.last.size() != dim) {
            throw ValidationError(fmt::format("embedding '{}' has dim {}, expected {}", e.id,
                                              e.dim(), dim));
        }
        std::string id = e.id;
        if (!emb.emplace(std::move(id), std::move(e)).second) {
            throw ValidationError("duplicate embedding id");
        }
    }

    AssembleSummary local;
    AssembleSummary& s = summary ? *summary : local;
    s = {};
    std::map<std::string, LabeledExample> examples;
    std::map<std::string, EmbeddingPair> joined;
    for (auto& ex : labels) {
        validate_example(ex, levels);
        auto it = emb.find(ex.id);
        if (it == emb.end()) {
            s.missing_embeddings.push_back(ex.id);
            continue;
        }
        ++s.counts[ex.split];
        if (ex.ratings) ++s.rated_counts[ex.split];
        joined.emplace(ex.id, it->second);
        std::string id = ex.id;
        if (!examples.emplace(std::move(id), std::move(ex)).second) {
            throw ValidationError("duplicate label id");
        }
    }
    if (!s.missing_embeddings.empty()) {
        spdlog::warn("{} labeled examples have no embedding and were dropped (first: '{}')",
                     s.missing_embeddings.size(), s.missing_embeddings.front());
    }
    if (s.counts[Split::train] == 0) {
        throw ValidationError("no training example could be joined with an embedding");
    }
    spdlog::info("dataset: train={} val={} test={} (rated: {}/{}/{})", s.counts[Split::train],
                 s.counts[Split::val], s.counts[Split::test], s.rated_counts[Split::train],
                 s.rated_counts[Split::val], s.rated_counts[Split::test]);
    return Dataset(std::move(examples), std::move(joined), levels, dim);
}

} // namespace lj
