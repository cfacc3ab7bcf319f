// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#include "likeness/readout.hpp"

#include <fmt/format.h>

#include "likeness/error.hpp"
#include "likeness/numerics.hpp"

namespace lj {

std::string_view to_string(ReadoutMode m) {
    switch (m) {
    case ReadoutMode::mean: return "mean";
    case ReadoutMode::last: return "last";
    case ReadoutMode::fused: return "fused";
    }
    return "?";
}

ReadoutMode parse_readout(std::string_view s) {
    if (s == "mean") return ReadoutMode::mean;
    if (s == "last") return ReadoutMode::last;
    if (s == "fused") return ReadoutMode::fused;
    throw ValidationError(fmt::format("unknown readout mode '{}'", s));
}

std::pair<double, double> FusionParams::coefficients() const {
    // Two-way softmax written as complementary sigmoids.
    return {sigmoid(w_first - w_last), sigmoid(w_last - w_first)};
}

std::vector<double> readout(std::span<const double> first_mean, std::span<const double> last,
                            const Readout& r) {
    if (first_mean.size() != last.size()) {
        throw ValidationError("readout: embedding sources differ in length");
    }
    switch (r.mode) {
    case ReadoutMode::mean: return {first_mean.begin(), first_mean.end()};
    case ReadoutMode::last: return {last.begin(), last.end()};
    case ReadoutMode::fused: break;
    }
    const auto [a1, a2] = r.fusion.coefficients();
    std::vector<double> h(first_mean.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = a1 * first_mean[i] + a2 * last[i];
    return h;
}

} // namespace lj
