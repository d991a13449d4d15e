// Copyright 2026 The wmsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Image serialization: 16-bit binary PGM for viewing and a raw float64 dump
 * for lossless exchange.
 *
 * Raw layout (little endian): "WMGRID01", u32 nx, u32 ny, f64 pixel_um,
 * then nx * ny f64 intensities, row-major, row 0 first.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wmsim/grid.hpp"

namespace wmsim {

struct PgmImage {
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::vector<std::uint16_t> samples; ///< row-major
};

/// Samples of `image` scaled linearly so that its maximum maps to 65535.
[[nodiscard]] std::vector<std::uint16_t>
quantize_16bit(const IntensityImage &image);

/// "P5" binary PGM, maxval 65535, big-endian samples.
[[nodiscard]] std::string render_pgm(const IntensityImage &image);

[[nodiscard]] PgmImage parse_pgm(std::string_view bytes);

[[nodiscard]] std::string render_raw_grid(const IntensityImage &image);
[[nodiscard]] IntensityImage parse_raw_grid(std::string_view bytes);

void write_file(const std::filesystem::path &path, std::string_view bytes);
[[nodiscard]] std::string read_file(const std::filesystem::path &path);

} // namespace wmsim
