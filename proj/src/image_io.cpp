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
#include "wmsim/image_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wmsim/errors.hpp"

namespace wmsim {

namespace {

constexpr std::string_view kRawMagic = "WMGRID01";
constexpr std::size_t kRawHeaderSize = 24;

template <typename T> void put_le(std::string &out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(U); ++b) {
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
    }
}

template <typename T> T get_le(std::string_view in, std::size_t offset) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
        bits |= static_cast<U>(static_cast<unsigned char>(in[offset + b]))
                << (8 * b);
    }
    return std::bit_cast<T>(bits);
}

/// Header tokenizer for PNM: whitespace-separated fields, '#' comments.
class PnmHeader {
  public:
    explicit PnmHeader(std::string_view bytes) : bytes_(bytes) {}

    std::string_view token() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !is_space(bytes_[pos_])) {
            ++pos_;
        }
        if (start == pos_) {
            throw FormatError("truncated PGM header");
        }
        return bytes_.substr(start, pos_ - start);
    }

    int integer() {
        const std::string_view t = token();
        int value = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(),
                                               value);
        if (ec != std::errc() || ptr != t.data() + t.size() || value <= 0) {
            throw FormatError("bad integer in PGM header");
        }
        return value;
    }

    /// Offset of the raster: one whitespace byte after the last field.
    std::size_t raster_offset() const { return pos_ + 1; }

  private:
    static bool is_space(char c) {
        return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\v' ||
               c == '\f';
    }

    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (is_space(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint16_t> quantize_16bit(const IntensityImage &image) {
    const RealPlane &v = image.values();
    const double peak = v.maxCoeff();
    std::vector<std::uint16_t> out(static_cast<std::size_t>(v.size()), 0);
    if (!(peak > 0)) {
        return out;
    }
    const double scale = 65535.0 / peak;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out[static_cast<std::size_t>(k)] = static_cast<std::uint16_t>(
            std::lround(std::min(65535.0, v.data()[k] * scale)));
    }
    return out;
}

std::string render_pgm(const IntensityImage &image) {
    const GridSpec &g = image.grid();
    std::string out = "P5\n" + std::to_string(g.nx) + " " +
                      std::to_string(g.ny) + "\n65535\n";
    const auto samples = quantize_16bit(image);
    out.reserve(out.size() + 2 * samples.size());
    for (const std::uint16_t s : samples) {
        out.push_back(static_cast<char>(s >> 8));
        out.push_back(static_cast<char>(s & 0xFF));
    }
    return out;
}

PgmImage parse_pgm(std::string_view bytes) {
    PnmHeader header(bytes);
    if (header.token() != "P5") {
        throw FormatError("not a binary PGM (P5) stream");
    }
    PgmImage img;
    img.width = header.integer();
    img.height = header.integer();
    img.maxval = header.integer();
    if (img.maxval > 65535) {
        throw FormatError("PGM maxval out of range");
    }
    const std::size_t offset = header.raster_offset();
    const std::size_t count =
        static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    const std::size_t bytes_per = img.maxval > 255 ? 2 : 1;
    if (offset > bytes.size() || bytes.size() - offset != count * bytes_per) {
        throw FormatError("PGM raster size does not match its header");
    }
    img.samples.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto *p =
            reinterpret_cast<const unsigned char *>(bytes.data() + offset);
        img.samples[k] =
            bytes_per == 2
                ? static_cast<std::uint16_t>((p[2 * k] << 8) | p[2 * k + 1])
                : p[k];
    }
    return img;
}

std::string render_raw_grid(const IntensityImage &image) {
    const GridSpec &g = image.grid();
    std::string out(kRawMagic);
    put_le(out, static_cast<std::uint32_t>(g.nx));
    put_le(out, static_cast<std::uint32_t>(g.ny));
    put_le(out, g.pixel_um);
    const RealPlane &v = image.values();
    out.reserve(kRawHeaderSize + 8 * static_cast<std::size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        put_le(out, v.data()[k]);
    }
    return out;
}

IntensityImage parse_raw_grid(std::string_view bytes) {
    if (bytes.size() < kRawHeaderSize ||
        bytes.substr(0, kRawMagic.size()) != kRawMagic) {
        throw FormatError("missing WMGRID01 header");
    }
    GridSpec g;
    g.nx = static_cast<int>(get_le<std::uint32_t>(bytes, 8));
    g.ny = static_cast<int>(get_le<std::uint32_t>(bytes, 12));
    g.pixel_um = get_le<double>(bytes, 16);
    g.validate();
    const std::size_t count =
        static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny);
    if (bytes.size() != kRawHeaderSize + 8 * count) {
        throw FormatError("raw grid payload does not match its header");
    }
    RealPlane values(g.ny, g.nx);
    for (std::size_t k = 0; k < count; ++k) {
        values.data()[k] = get_le<double>(bytes, kRawHeaderSize + 8 * k);
    }
    return {g, std::move(values)};
}

void write_file(const std::filesystem::path &path, std::string_view bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) {
        throw IoError("failed writing " + path.string());
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return {std::istreambuf_iterator<char>(is),
            std::istreambuf_iterator<char>()};
}

} // namespace wmsim
