// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lj::detail {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// nullopt on malformed input.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

/// Little-endian float32 payloads.
std::string encode_f32(std::span<const double> values);
std::optional<std::vector<double>> decode_f32(std::string_view text);

} // namespace lj::detail
