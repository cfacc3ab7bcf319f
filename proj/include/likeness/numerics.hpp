// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lj {

/// Logistic function, evaluated through exp(-|t|) so it never overflows.
double sigmoid(double t);

/// log(sigmoid(t)) without cancellation for large |t|.
double log_sigmoid(double t);

/// Adaptive-moment optimizer state for one flat parameter vector.
struct OptState {
    std::int64_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static OptState fresh(std::size_t n);
};

/// One bias-corrected Adam update, in place. Throws ValidationError on a
/// shape mismatch between params, grads and the moment vectors.
void adam_step(std::span<double> params, std::span<const double> grads, OptState& state,
               double lr);

using ScalarFn = std::function<double(std::span<const double>)>;

/// Central-difference gradient (f(p + h e_i) - f(p - h e_i)) / 2h.
/// Throws RuntimeFailure if f is non-finite at any probe.
std::vector<double> finite_diff_grad(const ScalarFn& f, std::span<const double> params,
                                     double h);

/// Per-coordinate z-scoring with population statistics.
struct Standardizer {
    static constexpr double kStdFloor = 1e-8;

    std::vector<double> mean;
    std::vector<double> std;

    bool fitted() const { return !mean.empty(); }
    std::vector<double> apply(std::span<const double> z) const;
    std::vector<double> invert(std::span<const double> z) const;
};

/// Requires at least two vectors of equal length.
Standardizer fit_standardizer(std::span<const std::vector<double>> values);

inline std::vector<double> apply_standardizer(std::span<const double> z, const Standardizer& s) {
    return s.apply(z);
}

} // namespace lj
