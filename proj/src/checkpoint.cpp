// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/checkpoint.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "likeness/error.hpp"

namespace lj {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kFormat = "likeness-judge-checkpoint";

std::string real(double v) { return fmt::format("{:.17g}", v); }

ojson reals(std::span<const double> v) {
    auto a = ojson::array();
    for (double x : v) a.push_back(real(x));
    return a;
}

ojson matrix(std::span<const double> v, std::size_t rows, std::size_t cols) {
    auto a = ojson::array();
    for (std::size_t r = 0; r < rows; ++r) a.push_back(reals(v.subspan(r * cols, cols)));
    return a;
}

double parse_real(const ojson& j, std::string_view where) {
    if (!j.is_string()) throw ValidationError(fmt::format("checkpoint: {} must be a decimal string", where));
    const auto& s = j.get_ref<const std::string&>();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError(fmt::format("checkpoint: {} holds invalid real '{}'", where, s));
    }
    return v;
}

std::vector<double> parse_reals(const ojson& j, std::size_t n, std::string_view where) {
    if (!j.is_array() || j.size() != n) {
        throw ValidationError(fmt::format("checkpoint: {} must be an array of {} reals", where, n));
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& v : j) out.push_back(parse_real(v, where));
    return out;
}

std::vector<double> parse_matrix(const ojson& j, std::size_t rows, std::size_t cols,
                                 std::string_view where) {
    if (!j.is_array() || j.size() != rows) {
        throw ValidationError(fmt::format("checkpoint: {} must have {} rows", where, rows));
    }
    std::vector<double> out;
    out.reserve(rows * cols);
    for (const auto& row : j) {
        auto r = parse_reals(row, cols, where);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

const ojson& field(const ojson& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(fmt::format("checkpoint: missing field '{}'", key));
    return *it;
}

std::size_t positive(const ojson& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ValidationError(fmt::format("checkpoint: '{}' must be a positive integer", key));
    }
    return v.get<std::size_t>();
}

} // namespace

std::string checkpoint_text(const Judge& j) {
    j.odl.validate();
    j.clf.validate();
    const std::size_t K = j.odl.dims;
    const std::size_t d = j.odl.input;
    ojson c;
    c["format"] = kFormat;
    c["version"] = kCheckpointVersion;
    c["d"] = d;
    c["K"] = K;
    c["r"] = j.odl.levels;
    ojson ro;
    ro["mode"] = to_string(j.odl.readout.mode);
    if (j.odl.readout.mode == ReadoutMode::fused) {
        ro["fusion"] = {{"w_first", real(j.odl.readout.fusion.w_first)},
                        {"w_last", real(j.odl.readout.fusion.w_last)}};
    }
    c["readout"] = std::move(ro);
    ojson odl;
    odl["W_p"] = matrix(j.odl.weights, K, d);
    odl["b"] = reals(j.odl.bias);
    odl["s_raw"] = reals(j.odl.scale_raw);
    c["odl"] = std::move(odl);
    ojson clf;
    clf["W_F"] = matrix(j.clf.weights, 2, j.clf.dims);
    clf["bias"] = j.clf.has_bias() ? reals(j.clf.bias) : ojson();
    if (j.clf.standardizer.fitted()) {
        clf["standardizer"] = {{"mean", reals(j.clf.standardizer.mean)},
                               {"std", reals(j.clf.standardizer.std)}};
    } else {
        clf["standardizer"] = nullptr;
    }
    c["classifier"] = std::move(clf);
    return c.dump(2) + "\n";
}

namespace {

Judge parse_checkpoint_object(const ojson& c);

} // namespace

Judge parse_checkpoint(std::istream& in) {
    ojson c;
    try {
        c = ojson::parse(in);
    } catch (const ojson::exception& e) {
        throw ValidationError(fmt::format("checkpoint: malformed: {}", e.what()));
    }
    try {
        return parse_checkpoint_object(c);
    } catch (const ojson::exception& e) {
        throw ValidationError(fmt::format("checkpoint: {}", e.what()));
    }
}

namespace {

Judge parse_checkpoint_object(const ojson& c) {
    if (!c.is_object() || c.value("format", std::string()) != kFormat) {
        throw ValidationError("checkpoint: not a likeness-judge checkpoint");
    }
    const auto& ver = field(c, "version");
    if (!ver.is_number_integer() || ver.get<int>() != kCheckpointVersion) {
        throw ValidationError(fmt::format("checkpoint: version mismatch (file {}, supported {})",
                                          ver.dump(), kCheckpointVersion));
    }
    Judge j;
    const std::size_t d = positive(c, "d");
    const std::size_t K = positive(c, "K");
    const int r = static_cast<int>(positive(c, "r"));
    check_levels(r);

    auto& odl = j.odl;
    odl.dims = K;
    odl.input = d;
    odl.levels = r;
    const auto& ro = field(c, "readout");
    odl.readout.mode = parse_readout(field(ro, "mode").get<std::string>());
    const bool has_fusion = ro.contains("fusion");
    if (has_fusion != (odl.readout.mode == ReadoutMode::fused)) {
        throw ValidationError("checkpoint: fusion weights must be present exactly in fused mode");
    }
    if (has_fusion) {
        const auto& f = ro["fusion"];
        odl.readout.fusion.w_first = parse_real(field(f, "w_first"), "readout.fusion.w_first");
        odl.readout.fusion.w_last = parse_real(field(f, "w_last"), "readout.fusion.w_last");
    }
    const auto& o = field(c, "odl");
    odl.weights = parse_matrix(field(o, "W_p"), K, d, "odl.W_p");
    odl.bias = parse_reals(field(o, "b"), K, "odl.b");
    odl.scale_raw = parse_reals(field(o, "s_raw"), K, "odl.s_raw");
    odl.validate();

    const auto& cl = field(c, "classifier");
    j.clf.dims = K;
    j.clf.weights = parse_matrix(field(cl, "W_F"), 2, K, "classifier.W_F");
    if (const auto& b = field(cl, "bias"); !b.is_null()) j.clf.bias = parse_reals(b, 2, "classifier.bias");
    if (const auto& s = field(cl, "standardizer"); !s.is_null()) {
        j.clf.standardizer.mean = parse_reals(field(s, "mean"), K, "standardizer.mean");
        j.clf.standardizer.std = parse_reals(field(s, "std"), K, "standardizer.std");
    }
    j.clf.validate();
    return j;
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const Judge& j) {
    const auto text = checkpoint_text(j);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure(fmt::format("cannot write checkpoint '{}'", path.string()));
    out << text;
    if (!out) throw RuntimeFailure(fmt::format("failed writing checkpoint '{}'", path.string()));
}

Judge load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(fmt::format("cannot open checkpoint '{}'", path.string()));
    return parse_checkpoint(in);
}

} // namespace lj
