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
#include "wmsim/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "wmsim/errors.hpp"

namespace wmsim {

namespace {

bool valid_extent(int n) {
    return n >= 64 && std::has_single_bit(static_cast<unsigned>(n));
}

/// One FFT engine and scratch buffer per thread; Eigen::FFT caches plans
/// internally and is not safe to share.
struct FftWorkspace {
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> in;
    std::vector<std::complex<double>> out;

    FftWorkspace() { fft.SetFlag(Eigen::FFT<double>::Unscaled); }

    void transform(std::size_t n, DftSign sign) {
        out.resize(n);
        if (sign == DftSign::Plus) {
            fft.inv(out.data(), in.data(), static_cast<Eigen::Index>(n));
        } else {
            fft.fwd(out.data(), in.data(), static_cast<Eigen::Index>(n));
        }
    }
};

FftWorkspace &workspace() {
    thread_local FftWorkspace ws;
    return ws;
}

void apply_checkerboard(Plane &plane) {
    for (Eigen::Index i = 0; i < plane.rows(); ++i) {
        for (Eigen::Index j = (i & 1) ? 0 : 1; j < plane.cols(); j += 2) {
            plane(i, j) = -plane(i, j);
        }
    }
}

void require_space(const PolarizedField &field, Space expected,
                   const char *op) {
    if (field.space() != expected) {
        throw WrongSpace(std::string(op) + " requires a " +
                         (expected == Space::Position ? "position-space"
                                                      : "momentum-space") +
                         " field");
    }
}

} // namespace

void GridSpec::validate() const {
    if (!valid_extent(nx) || !valid_extent(ny)) {
        throw InvalidArgument("grid dimensions must be powers of two >= 64");
    }
    if (!(pixel_um > 0) || !std::isfinite(pixel_um)) {
        throw InvalidArgument("grid pixel size must be positive");
    }
}

double GridSpec::kx(int col) const {
    return (col - nx / 2) * 2 * std::numbers::pi / extent_x_mm();
}

double GridSpec::ky(int row) const {
    return (ny / 2 - row) * 2 * std::numbers::pi / extent_y_mm();
}

PolarizedField::PolarizedField(GridSpec grid, Plane h, Plane v, Space space)
    : grid_(grid), h_(std::move(h)), v_(std::move(v)), space_(space) {
    grid_.validate();
    if (h_.rows() != grid_.ny || h_.cols() != grid_.nx ||
        v_.rows() != grid_.ny || v_.cols() != grid_.nx) {
        throw InvalidArgument("field planes do not match the grid shape");
    }
}

double PolarizedField::norm() const {
    return (h_.abs2().sum() + v_.abs2().sum()) * grid_.pixel_area_mm2();
}

IntensityImage::IntensityImage(GridSpec grid, RealPlane values)
    : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.rows() != grid_.ny || values_.cols() != grid_.nx) {
        throw InvalidArgument("image does not match the grid shape");
    }
    if (!values_.allFinite() || (values_ < 0).any()) {
        throw InvalidArgument("image values must be finite and non-negative");
    }
}

PolarizedField init_gaussian(const GridSpec &grid, double sigma_mm,
                             const QubitState<double> &pol) {
    grid.validate();
    detail::require_positive_sigma(sigma_mm);
    if (sigma_mm < 4 * grid.pixel_mm()) {
        throw GridTooCoarse("sigma must span at least 4 pixels");
    }
    if (6 * sigma_mm > std::min(grid.extent_x_mm(), grid.extent_y_mm())) {
        throw GridTooSmall("6 sigma does not fit inside the grid");
    }
    const double inv4s2 = 1.0 / (4 * sigma_mm * sigma_mm);
    Eigen::ArrayXd gx(grid.nx);
    Eigen::ArrayXd gy(grid.ny);
    for (int j = 0; j < grid.nx; ++j) {
        gx(j) = std::exp(-grid.x_mm(j) * grid.x_mm(j) * inv4s2);
    }
    for (int i = 0; i < grid.ny; ++i) {
        gy(i) = std::exp(-grid.y_mm(i) * grid.y_mm(i) * inv4s2);
    }
    const double scale = 1.0 / std::sqrt(gx.square().sum() *
                                         gy.square().sum() *
                                         grid.pixel_area_mm2());
    Plane profile = (gy.matrix() * gx.matrix().transpose())
                        .array()
                        .cast<std::complex<double>>() *
                    scale;
    Plane v = profile * pol.amp_v();
    profile *= pol.amp_h();
    return {grid, std::move(profile), std::move(v), Space::Position};
}

void centered_dft2(Plane &plane, DftSign sign) {
    const auto rows = static_cast<std::size_t>(plane.rows());
    const auto cols = static_cast<std::size_t>(plane.cols());
    FftWorkspace &ws = workspace();

    apply_checkerboard(plane);
    ws.in.resize(cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::complex<double> *row = plane.data() + i * cols;
        std::copy(row, row + cols, ws.in.begin());
        ws.transform(cols, sign);
        std::copy(ws.out.begin(), ws.out.end(), row);
    }
    ws.in.resize(rows);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            ws.in[i] = plane(i, j);
        }
        ws.transform(rows, sign);
        for (std::size_t i = 0; i < rows; ++i) {
            plane(i, j) = ws.out[i];
        }
    }
    apply_checkerboard(plane);
    plane *= 1.0 / std::sqrt(static_cast<double>(rows * cols));
}

PolarizedField fourier_lens(PolarizedField field) {
    const bool to_focal = field.space() == Space::Position;
    const DftSign sign = to_focal ? DftSign::Plus : DftSign::Minus;
    centered_dft2(field.h(), sign);
    centered_dft2(field.v(), sign);
    field.set_space(to_focal ? Space::Momentum : Space::Position);
    return field;
}

PolarizedField apply_phase_ramp(PolarizedField field, double delta_mm,
                                Axis axis) {
    require_space(field, Space::Momentum, "phase ramp");
    const GridSpec &g = field.grid();
    const double extent = axis == Axis::X ? g.extent_x_mm() : g.extent_y_mm();
    // Phase step per pixel is 2 pi delta / extent; it must stay below pi.
    if (!(2 * std::abs(delta_mm) < extent)) {
        throw AliasingRisk("phase increment per pixel reaches pi");
    }
    if (delta_mm == 0) {
        return field;
    }
    Plane &h = field.h();
    if (axis == Axis::X) {
        Eigen::Array<std::complex<double>, 1, Eigen::Dynamic> ramp(g.nx);
        for (int j = 0; j < g.nx; ++j) {
            ramp(j) = std::polar(1.0, delta_mm * g.kx(j));
        }
        h.rowwise() *= ramp;
    } else {
        Eigen::Array<std::complex<double>, Eigen::Dynamic, 1> ramp(g.ny);
        for (int i = 0; i < g.ny; ++i) {
            ramp(i) = std::polar(1.0, delta_mm * g.ky(i));
        }
        h.colwise() *= ramp;
    }
    return field;
}

PolarizedField apply_slm_mask(PolarizedField field, int alpha, Axis axis,
                              double mm_per_unit) {
    if (alpha < 0) {
        throw InvalidArgument("grating density must be non-negative");
    }
    return apply_phase_ramp(std::move(field), mm_per_unit * alpha, axis);
}

PolarizedField apply_conditional_shift(PolarizedField field, double delta_mm,
                                       Axis axis) {
    require_space(field, Space::Position, "conditional shift");
    const GridSpec &g = field.grid();
    const double extent = axis == Axis::X ? g.extent_x_mm() : g.extent_y_mm();
    if (!(4 * std::abs(delta_mm) < extent)) {
        throw ShiftTooLarge("shift must be below a quarter of the grid extent");
    }
    field = fourier_lens(std::move(field));
    field = apply_phase_ramp(std::move(field), delta_mm, axis);
    return fourier_lens(std::move(field));
}

PolarizedField apply_polarization_unitary(PolarizedField field,
                                          const Matrix2c<double> &u) {
    if (!is_unitary(u)) {
        throw NonUnitary("polarization transform is not unitary");
    }
    Plane h = u(0, 0) * field.h() + u(0, 1) * field.v();
    field.v() = u(1, 0) * field.h() + u(1, 1) * field.v();
    field.h() = std::move(h);
    return field;
}

IntensityImage intensity(const PolarizedField &field) {
    require_space(field, Space::Position, "intensity");
    return {field.grid(), field.h().abs2() + field.v().abs2()};
}

IntensityImage coincidence_image(const IntensityImage &x_photon,
                                 const IntensityImage &y_photon) {
    if (!(x_photon.grid() == y_photon.grid())) {
        throw InvalidArgument("coincidence images must share a grid");
    }
    const GridSpec &g = x_photon.grid();
    const Eigen::RowVectorXd px =
        (x_photon.values().colwise().sum() * g.pixel_mm()).matrix();
    const Eigen::VectorXd py =
        (y_photon.values().rowwise().sum() * g.pixel_mm()).matrix();
    return {g, (py * px).array()};
}

DeflectionTriple<double> discrete_means(const IntensityImage &image) {
    const GridSpec &g = image.grid();
    const RealPlane &w = image.values();
    const double total = w.sum();
    if (!(total > 0)) {
        throw EmptyImage("image carries no intensity");
    }
    Eigen::RowVectorXd xs(g.nx);
    Eigen::VectorXd ys(g.ny);
    for (int j = 0; j < g.nx; ++j) {
        xs(j) = g.x_mm(j);
    }
    for (int i = 0; i < g.ny; ++i) {
        ys(i) = g.y_mm(i);
    }
    const Eigen::RowVectorXd col_sums = w.colwise().sum().matrix();
    const Eigen::VectorXd row_sums = w.rowwise().sum().matrix();
    const double sx = col_sums.dot(xs);
    const double sy = row_sums.dot(ys);
    const double sxy = ys.dot(w.matrix() * xs.transpose());
    return {sx / total, sy / total, sxy / total};
}

} // namespace wmsim
