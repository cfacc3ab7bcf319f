// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops over the embedding dimension. Each kernel has a
// scalar reference and vector variants; the best one available on the
// running CPU is selected once at startup. LIKENESS_JUDGE_SIMD=scalar forces
// the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace lj::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view name(Isa isa);

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);

struct Table {
    Isa isa;
    DotFn dot;
    AxpyFn axpy;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
} // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
} // namespace avx2

namespace neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
} // namespace neon

/// True when the variant was compiled in and the CPU supports it.
bool available(Isa isa);

/// Table for a specific variant; falls back to scalar if unavailable.
const Table& table(Isa isa);

/// The table chosen for this process.
const Table& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

} // namespace lj::kernels
