// Copyright (c) 2026, The likeness-judge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "likeness/judge.hpp"

namespace lj {

inline constexpr int kCheckpointVersion = 1;

/// Reals are written as decimal strings with 17 significant digits, so a
/// read after write reproduces every double exactly.
std::string checkpoint_text(const Judge& j);
Judge parse_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Judge& j);
/// Throws ValidationError on a version mismatch or malformed content.
Judge load_checkpoint(const std::filesystem::path& path);

} // namespace lj
