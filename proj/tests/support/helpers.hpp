// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "likeness/classifier.hpp"
#include "likeness/odl.hpp"

namespace lj::test {

inline std::vector<double> gauss_vec(std::mt19937_64& rng, std::size_t n, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

/// Small ODL with random weights, bias, scales and fusion.
inline OdlParams random_odl(std::mt19937_64& rng, std::size_t K, std::size_t d, int r,
                            ReadoutMode mode = ReadoutMode::fused) {
    OdlParams p;
    p.dims = K;
    p.input = d;
    p.levels = r;
    p.weights = gauss_vec(rng, K * d, 0.7);
    p.bias = gauss_vec(rng, K, 0.5);
    std::uniform_real_distribution<double> s(std::log(0.8), std::log(6.0));
    p.scale_raw.resize(K);
    for (auto& x : p.scale_raw) x = s(rng);
    p.readout.mode = mode;
    if (mode == ReadoutMode::fused) {
        std::normal_distribution<double> w(0.0, 0.8);
        p.readout.fusion = {w(rng), w(rng)};
    }
    return p;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Vector relative error ||a - b|| / max(||a||, ||b||), 0 when both vanish.
inline double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double den = std::sqrt(std::max(na, nb));
    return den == 0.0 ? 0.0 : std::sqrt(num) / den;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("likeness_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace lj::test
