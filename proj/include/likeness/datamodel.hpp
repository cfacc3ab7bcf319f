// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lj {

enum class Label { human, machine };
enum class Source { HH, HM, PH };
enum class Language { zh, en, other };
enum class Split { train, val, test };

std::string_view to_string(Label v);
std::string_view to_string(Source v);
std::string_view to_string(Language v);
std::string_view to_string(Split v);

// Throw ValidationError on unknown tokens.
Label parse_label(std::string_view s);
Source parse_source(std::string_view s);
Language parse_language(std::string_view s);
Split parse_split(std::string_view s);

/// The two per-dialogue embedding sources. Values are stored widened to
/// double; files carry 32-bit floats, so narrowing back is exact.
struct EmbeddingPair {
    std::string id;
    std::vector<double> first_mean;
    std::vector<double> last;

    std::size_t dim() const { return first_mean.size(); }
};

struct LabeledExample {
    std::string id;
    Label label = Label::human;
    Source source = Source::HH;
    Language language = Language::other;
    Split split = Split::train;
    std::optional<std::vector<int>> ratings;
    /// Dialogue length in seconds, used only for the length trend test.
    std::optional<double> duration;
};

inline constexpr int kDefaultLevels = 5;

/// Throws ValidationError unless levels >= 3.
void check_levels(int levels);

// Embeddings file: one JSON object per line with id, dim, first_mean, last;
// the vectors are base64 of little-endian IEEE-754 float32.
// Non-fatal findings (unknown keys, CR line endings) are appended to
// warnings when given.
using Warnings = std::vector<std::string>;

std::vector<EmbeddingPair> parse_embeddings(std::istream& in, Warnings* warnings = nullptr);
std::vector<EmbeddingPair> load_embeddings(const std::filesystem::path& path,
                                           Warnings* warnings = nullptr);
void write_embeddings(std::ostream& out, std::span<const EmbeddingPair> pairs);
void save_embeddings(const std::filesystem::path& path, std::span<const EmbeddingPair> pairs);

std::vector<LabeledExample> parse_labels(std::istream& in, int levels = kDefaultLevels,
                                         Warnings* warnings = nullptr);
std::vector<LabeledExample> load_labels(const std::filesystem::path& path,
                                        int levels = kDefaultLevels,
                                        Warnings* warnings = nullptr);
void write_labels(std::ostream& out, std::span<const LabeledExample> labels);
void save_labels(const std::filesystem::path& path, std::span<const LabeledExample> labels);

/// Checks one example against the LabeledExample invariants.
void validate_example(const LabeledExample& ex, int levels);

struct AssembleSummary {
    std::vector<std::string> missing_embeddings;
    std::map<Split, std::size_t> counts;
    std::map<Split, std::size_t> rated_counts;
};

/// Immutable joined view of labels and embeddings. Only examples with a
/// matching embedding are kept; maps are ordered by id so every traversal is
/// deterministic.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::map<std::string, LabeledExample> examples,
            std::map<std::string, EmbeddingPair> embeddings, int levels, std::size_t dim);

    const std::map<std::string, LabeledExample>& examples() const { return examples_; }
    const std::map<std::string, EmbeddingPair>& embeddings() const { return embeddings_; }
    int levels() const { return levels_; }
    std::size_t dim() const { return dim_; }

    const EmbeddingPair& embedding(const std::string& id) const;

    /// Examples in the split, in id order.
    std::vector<const LabeledExample*> split(Split s) const;
    /// Examples in the split that carry ratings, in id order.
    std::vector<const LabeledExample*> rated(Split s) const;

private:
    std::map<std::string, LabeledExample> examples_;
    std::map<std::string, EmbeddingPair> embeddings_;
    int levels_ = kDefaultLevels;
    std::size_t dim_ = 0;
};

/// Joins labels and embeddings on id. Labels without embeddings are dropped
/// and listed in the summary. Throws ValidationError when no training
/// example can be joined.
Dataset assemble(std::vector<EmbeddingPair> embeddings, std::vector<LabeledExample> labels,
                 int levels = kDefaultLevels, AssembleSummary* summary = nullptr);

} // namespace lj
