// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "likeness/error.hpp"

namespace lj {

double sigmoid(double t) {
    if (t >= 0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double log_sigmoid(double t) {
    // log(1 / (1 + e^-t)) = -log1p(e^-t) for t >= 0, t - log1p(e^t) otherwise.
    if (t >= 0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

OptState OptState::fresh(std::size_t n) {
    OptState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    return s;
}

void adam_step(std::span<double> params, std::span<const double> grads, OptState& state,
               double lr) {
    if (grads.size() != params.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw ValidationError(fmt::format(
            "adam_step: shape mismatch (params {}, grads {}, m {}, v {})", params.size(),
            grads.size(), state.m.size(), state.v.size()));
    }
    ++state.step;
    const double b1 = state.beta1;
    const double b2 = state.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

std::vector<double> finite_diff_grad(const ScalarFn& f, std::span<const double> params,
                                     double h) {
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> g(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double orig = p[i];
        p[i] = orig + h;
        const double up = f(p);
        p[i] = orig - h;
        const double down = f(p);
        p[i] = orig;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw RuntimeFailure(fmt::format("finite_diff_grad: non-finite value at coordinate {}", i));
        }
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

std::vector<double> Standardizer::apply(std::span<const double> z) const {
    if (!fitted()) throw ValidationError("standardizer has not been fitted");
    if (z.size() != mean.size()) {
        throw ValidationError(
            fmt::format("standardizer: vector has {} entries, expected {}", z.size(), mean.size()));
    }
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = (z[k] - mean[k]) / std[k];
    return out;
}

std::vector<double> Standardizer::invert(std::span<const double> z) const {
    if (z.size() != mean.size()) throw ValidationError("standardizer: size mismatch");
    std::vector<double> out(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] * std[k] + mean[k];
    return out;
}

Standardizer fit_standardizer(std::span<const std::vector<double>> values) {
    if (values.size() < 2) {
        throw ValidationError("fit_standardizer: need at least two vectors");
    }
    const std::size_t k = values.front().size();
    Standardizer s;
    s.mean.assign(k, 0.0);
    s.std.assign(k, 0.0);
    for (const auto& v : values) {
        if (v.size() != k) throw ValidationError("fit_standardizer: ragged input");
        for (std::size_t i = 0; i < k; ++i) s.mean[i] += v[i];
    }
    const double n = static_cast<double>(values.size());
    for (auto& m : s.mean) m /= n;
    for (const auto& v : values) {
        for (std::size_t i = 0; i < k; ++i) {
            const double d = v[i] - s.mean[i];
            s.std[i] += d * d;
        }
    }
    for (auto& sd : s.std) sd = std::max(std::sqrt(sd / n), Standardizer::kStdFloor);
    return s;
}

} // namespace lj
