// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <string_view>

#include <spdlog/spdlog.h>

#include "likeness/kernels.hpp"

namespace lj::kernels {

namespace {

constexpr Table kScalar{Isa::scalar, &scalar::dot, &scalar::axpy};
constexpr Table kAvx2{Isa::avx2, &avx2::dot, &avx2::axpy};
constexpr Table kNeon{Isa::neon, &neon::dot, &neon::axpy};

const Table& select() {
    if (const char* env = std::getenv("LIKENESS_JUDGE_SIMD")) {
        std::string_view want = env;
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == name(isa)) {
                if (available(isa)) return table(isa);
                spdlog::warn("LIKENESS_JUDGE_SIMD={} is not supported here, using scalar", want);
                return kScalar;
            }
        }
        spdlog::warn("unknown LIKENESS_JUDGE_SIMD value '{}', auto-selecting", want);
    }
    if (available(Isa::avx2)) return kAvx2;
    if (available(Isa::neon)) return kNeon;
    return kScalar;
}

} // namespace

std::string_view name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "?";
}

bool available(Isa isa) {
    switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Isa::neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const Table& table(Isa isa) {
    if (!available(isa)) return kScalar;
    switch (isa) {
    case Isa::avx2: return kAvx2;
    case Isa::neon: return kNeon;
    case Isa::scalar: break;
    }
    return kScalar;
}

const Table& active() {
    static const Table& chosen = select();
    return chosen;
}

} // namespace lj::kernels
