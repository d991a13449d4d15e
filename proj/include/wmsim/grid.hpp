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
 * Discretized polarized field on a uniform pixel lattice: Fourier lenses,
 * SLM phase masks, polarization optics and intensity imaging.
 *
 * Pixel (i, j) sits at ((j - nx/2) * pixel, (ny/2 - i) * pixel): columns run
 * along +x and row 0 is the largest y, as in a camera image.
 */
#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "wmsim/pointer.hpp"
#include "wmsim/qubit.hpp"

namespace wmsim {

/// Grating calibration: coupling strength per unit of blazing density, in mm.
inline constexpr double kSlmMmPerUnit = 0.0237;

using Plane = Eigen::Array<std::complex<double>, Eigen::Dynamic,
                           Eigen::Dynamic, Eigen::RowMajor>;
using RealPlane =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GridSpec {
    int nx = 1024;
    int ny = 1024;
    double pixel_um = 13.5;

    /// Throws InvalidArgument unless nx, ny are powers of two >= 64 and the
    /// pixel is positive.
    void validate() const;

    [[nodiscard]] double pixel_mm() const { return pixel_um * 1e-3; }
    [[nodiscard]] double pixel_area_mm2() const {
        return pixel_mm() * pixel_mm();
    }
    [[nodiscard]] double extent_x_mm() const { return nx * pixel_mm(); }
    [[nodiscard]] double extent_y_mm() const { return ny * pixel_mm(); }

    [[nodiscard]] double x_mm(int col) const {
        return (col - nx / 2) * pixel_mm();
    }
    [[nodiscard]] double y_mm(int row) const {
        return (ny / 2 - row) * pixel_mm();
    }
    /// Angular spatial frequency (rad/mm) of momentum-plane column `col`.
    [[nodiscard]] double kx(int col) const;
    /// Angular spatial frequency (rad/mm) of momentum-plane row `row`.
    [[nodiscard]] double ky(int row) const;

    bool operator==(const GridSpec &) const = default;
};

enum class Space { Position, Momentum };

/// Amplitude planes for the H and V polarizations.
class PolarizedField {
  public:
    PolarizedField(GridSpec grid, Plane h, Plane v, Space space);

    [[nodiscard]] const GridSpec &grid() const { return grid_; }
    [[nodiscard]] const Plane &h() const { return h_; }
    [[nodiscard]] const Plane &v() const { return v_; }
    [[nodiscard]] Plane &h() { return h_; }
    [[nodiscard]] Plane &v() { return v_; }
    [[nodiscard]] Space space() const { return space_; }
    void set_space(Space s) { space_ = s; }

    /// sum(|h|^2 + |v|^2) * pixel area.
    [[nodiscard]] double norm() const;

  private:
    GridSpec grid_;
    Plane h_;
    Plane v_;
    Space space_;
};

/// Non-negative intensity per mm^2 on a grid.
class IntensityImage {
  public:
    IntensityImage(GridSpec grid, RealPlane values);

    [[nodiscard]] const GridSpec &grid() const { return grid_; }
    [[nodiscard]] const RealPlane &values() const { return values_; }

  private:
    GridSpec grid_;
    RealPlane values_;
};

/// Centred, normalized Gaussian pointer (intensity std `sigma_mm`) carrying
/// the polarization `pol`. Needs 6 sigma inside the grid (GridTooSmall) and
/// sigma >= 4 pixels (GridTooCoarse).
[[nodiscard]] PolarizedField init_gaussian(const GridSpec &grid,
                                           double sigma_mm,
                                           const QubitState<double> &pol);

enum class DftSign { Plus, Minus };

/// In-place unitary centred 2-D DFT with kernel exp(+/- i k.r), zero
/// frequency at the array centre. Two Plus transforms invert coordinates.
void centered_dft2(Plane &plane, DftSign sign);

/// Optical Fourier transform of both planes. A position-space field is
/// mapped to the focal plane with the exp(+i k.r) kernel; a momentum-space
/// field is returned to an upright image plane with the conjugate kernel.
[[nodiscard]] PolarizedField fourier_lens(PolarizedField field);

/// Multiplies the H plane of a momentum-space field by exp(i delta k_axis),
/// which translates H by +delta once back in position space.
[[nodiscard]] PolarizedField apply_phase_ramp(PolarizedField field,
                                              double delta_mm, Axis axis);

/// Blazed grating of density `alpha` acting on H in the focal plane;
/// equivalent to a phase ramp with delta = mm_per_unit * alpha.
[[nodiscard]] PolarizedField
apply_slm_mask(PolarizedField field, int alpha, Axis axis,
               double mm_per_unit = kSlmMmPerUnit);

/// exp(-i delta p_axis (x) |H><H|) on a position-space field, as a spectral
/// shift. |delta| must stay below a quarter of the grid extent.
[[nodiscard]] PolarizedField apply_conditional_shift(PolarizedField field,
                                                     double delta_mm,
                                                     Axis axis);

/// Pixel-wise polarization transform (h, v) -> u (h, v).
[[nodiscard]] PolarizedField
apply_polarization_unitary(PolarizedField field, const Matrix2c<double> &u);

/// Polarization-traced intensity |h|^2 + |v|^2 of a position-space field.
[[nodiscard]] IntensityImage intensity(const PolarizedField &field);

/// Coincidence distribution of two independent photons: x from `x_photon`,
/// y from `y_photon`.
[[nodiscard]] IntensityImage coincidence_image(const IntensityImage &x_photon,
                                               const IntensityImage &y_photon);

/// Intensity-weighted means of x, y and x*y in mm from the grid centre.
[[nodiscard]] DeflectionTriple<double>
discrete_means(const IntensityImage &image);

} // namespace wmsim
