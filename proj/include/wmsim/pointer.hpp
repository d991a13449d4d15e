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
 * Exact pointer dynamics for Gaussian pointers coupled to a polarization
 * qubit.
 *
 * A pointer amplitude of intensity standard deviation sigma is
 * phi(x) ~ exp(-x^2 / (4 sigma^2)), so two copies shifted by a and b overlap
 * as exp(-(a - b)^2 / (8 sigma^2)). All lengths are in millimetres.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "wmsim/errors.hpp"
#include "wmsim/qubit.hpp"
#include "wmsim/scalar_search.hpp"

namespace wmsim {

enum class Axis { X, Y };

/// <x>, <y> in mm and <x y> in mm^2.
template <typename Scalar = double> struct DeflectionTriple {
    Scalar x_mean{};
    Scalar y_mean{};
    Scalar xy_mean{};

    [[nodiscard]] bool finite() const {
        return std::isfinite(x_mean) && std::isfinite(y_mean) &&
               std::isfinite(xy_mean);
    }
};

template <typename Scalar = double> class GaussianPointerSpec {
  public:
    explicit GaussianPointerSpec(Scalar sigma_mm) : sigma_(sigma_mm) {
        if (!(sigma_mm > 0) || !std::isfinite(sigma_mm)) {
            throw InvalidArgument("pointer width sigma must be positive");
        }
    }

    [[nodiscard]] Scalar sigma() const { return sigma_; }

  private:
    Scalar sigma_;
};

namespace detail {
template <typename Scalar> void require_positive_sigma(Scalar sigma) {
    (void)GaussianPointerSpec<Scalar>(sigma);
}
} // namespace detail

/// <phi_a|phi_b> for unit-norm Gaussians centred at a and b.
template <typename Scalar>
[[nodiscard]] Scalar overlap(Scalar a_shift, Scalar b_shift, Scalar sigma) {
    detail::require_positive_sigma(sigma);
    const Scalar d = a_shift - b_shift;
    return std::exp(-d * d / (8 * sigma * sigma));
}

/// <phi_a|x|phi_b>
template <typename Scalar>
[[nodiscard]] Scalar first_moment(Scalar a_shift, Scalar b_shift,
                                  Scalar sigma) {
    return (a_shift + b_shift) / 2 * overlap(a_shift, b_shift, sigma);
}

template <typename Scalar = double> struct PointerTerm {
    Complex<Scalar> coeff;
    Scalar shift_x;
    Scalar shift_y;
    Polarization pol;
};

/// Finite superposition sum_i c_i |phi(x - x_i, y - y_i)> |pol_i>.
template <typename Scalar = double> class GaussianSuperposition {
  public:
    using Term = PointerTerm<Scalar>;

    /// Terms whose shifts agree within this many mm are merged.
    static constexpr Scalar kMergeTolerance = Scalar(1e-12);

    GaussianSuperposition() = default;

    explicit GaussianSuperposition(std::vector<Term> terms)
        : terms_(merge(std::move(terms))) {}

    /// Undeflected pointer carrying polarization `pol`.
    static GaussianSuperposition centered(const QubitState<Scalar> &pol) {
        return GaussianSuperposition(
            {Term{pol.amp_h(), 0, 0, Polarization::H},
             Term{pol.amp_v(), 0, 0, Polarization::V}});
    }

    [[nodiscard]] const std::vector<Term> &terms() const { return terms_; }

    /// Sum of conj(c_i) c_j K(i, j) over same-polarization pairs.
    template <typename Kernel>
    [[nodiscard]] Scalar pair_sum(Kernel &&kernel) const {
        Complex<Scalar> acc{0};
        for (const Term &ti : terms_) {
            for (const Term &tj : terms_) {
                if (ti.pol != tj.pol) {
                    continue;
                }
                acc += std::conj(ti.coeff) * tj.coeff * kernel(ti, tj);
            }
        }
        return acc.real();
    }

    [[nodiscard]] Scalar norm(Scalar sigma) const {
        return pair_sum([sigma](const Term &a, const Term &b) {
            return overlap(a.shift_x, b.shift_x, sigma) *
                   overlap(a.shift_y, b.shift_y, sigma);
        });
    }

  private:
    static std::vector<Term> merge(std::vector<Term> terms) {
        std::vector<Term> out;
        out.reserve(terms.size());
        for (const Term &t : terms) {
            if (t.coeff == Complex<Scalar>(0)) {
                continue;
            }
            bool merged = false;
            for (Term &o : out) {
                if (o.pol == t.pol &&
                    std::abs(o.shift_x - t.shift_x) <= kMergeTolerance &&
                    std::abs(o.shift_y - t.shift_y) <= kMergeTolerance) {
                    o.coeff += t.coeff;
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                out.push_back(t);
            }
        }
        std::erase_if(out, [](const Term &t) {
            return t.coeff == Complex<Scalar>(0);
        });
        return out;
    }

    std::vector<Term> terms_;
};

/// exp(-i delta p_axis (x) |H><H|): translates the H-polarized terms by
/// +delta along `axis`.
template <typename Scalar>
[[nodiscard]] GaussianSuperposition<Scalar>
apply_coupling(const GaussianSuperposition<Scalar> &state, Axis axis,
               Scalar delta) {
    if (!(delta >= 0)) {
        throw InvalidArgument("coupling strength must be non-negative");
    }
    auto terms = state.terms();
    for (auto &t : terms) {
        if (t.pol == Polarization::H) {
            (axis == Axis::X ? t.shift_x : t.shift_y) += delta;
        }
    }
    return GaussianSuperposition<Scalar>(std::move(terms));
}

template <typename Scalar>
[[nodiscard]] GaussianSuperposition<Scalar>
apply_polarization(const GaussianSuperposition<Scalar> &state,
                   const Matrix2c<Scalar> &u) {
    if (!is_unitary(u)) {
        throw NonUnitary("polarization transform is not unitary");
    }
    std::vector<PointerTerm<Scalar>> terms;
    terms.reserve(2 * state.terms().size());
    for (const auto &t : state.terms()) {
        const int col = static_cast<int>(t.pol);
        terms.push_back({u(0, col) * t.coeff, t.shift_x, t.shift_y,
                         Polarization::H});
        terms.push_back({u(1, col) * t.coeff, t.shift_x, t.shift_y,
                         Polarization::V});
    }
    return GaussianSuperposition<Scalar>(std::move(terms));
}

/// <x>, <y> and <x y> of a normalized superposition.
template <typename Scalar>
[[nodiscard]] DeflectionTriple<Scalar>
moments(const GaussianSuperposition<Scalar> &state, Scalar sigma) {
    detail::require_positive_sigma(sigma);
    using Term = PointerTerm<Scalar>;
    DeflectionTriple<Scalar> out;
    out.x_mean = state.pair_sum([sigma](const Term &a, const Term &b) {
        return first_moment(a.shift_x, b.shift_x, sigma) *
               overlap(a.shift_y, b.shift_y, sigma);
    });
    out.y_mean = state.pair_sum([sigma](const Term &a, const Term &b) {
        return overlap(a.shift_x, b.shift_x, sigma) *
               first_moment(a.shift_y, b.shift_y, sigma);
    });
    out.xy_mean = state.pair_sum([sigma](const Term &a, const Term &b) {
        return first_moment(a.shift_x, b.shift_x, sigma) *
               first_moment(a.shift_y, b.shift_y, sigma);
    });
    return out;
}

/// Default wave-plate angles of the sequential train, in degrees.
inline constexpr double kPrepHwpDeg = 30.0;
inline constexpr double kMidHwpDeg = -30.0;

/// HWP(prep) -> X coupling on an H-polarized centred pointer.
template <typename Scalar>
[[nodiscard]] GaussianSuperposition<Scalar>
single_coupling_state(Scalar delta, Axis axis = Axis::X,
                      Scalar prep_deg = Scalar(kPrepHwpDeg)) {
    auto s = GaussianSuperposition<Scalar>::centered(QubitState<Scalar>::h());
    s = apply_polarization(s, waveplate_hwp(prep_deg));
    return apply_coupling(s, axis, delta);
}

/// HWP(prep) -> X coupling -> HWP(mid) -> Y coupling on one photon.
template <typename Scalar>
[[nodiscard]] GaussianSuperposition<Scalar>
sequential_state(Scalar delta, Scalar prep_deg = Scalar(kPrepHwpDeg),
                 Scalar mid_deg = Scalar(kMidHwpDeg)) {
    auto s = single_coupling_state(delta, Axis::X, prep_deg);
    s = apply_polarization(s, waveplate_hwp(mid_deg));
    return apply_coupling(s, Axis::Y, delta);
}

/// Two independent photons, A coupled along x and B along y; the joint
/// moment factorizes into the product of the marginals.
template <typename Scalar>
[[nodiscard]] DeflectionTriple<Scalar>
two_qubit_moments(Scalar delta, Scalar sigma,
                  Scalar prep_deg = Scalar(kPrepHwpDeg)) {
    const auto a = moments(single_coupling_state(delta, Axis::X, prep_deg),
                           sigma);
    const auto b = moments(single_coupling_state(delta, Axis::Y, prep_deg),
                           sigma);
    return {a.x_mean, b.y_mean, a.x_mean * b.y_mean};
}

/// Closed-form deflections of the sequential single-qubit train.
template <typename Scalar>
[[nodiscard]] DeflectionTriple<Scalar> closed_form_sequential(Scalar delta,
                                                              Scalar sigma) {
    detail::require_positive_sigma(sigma);
    if (!(delta >= 0)) {
        throw InvalidArgument("coupling strength must be non-negative");
    }
    const Scalar e = std::exp(-delta * delta / (8 * sigma * sigma));
    return {delta / 4, delta / 8 * (5 - 3 * e),
            delta * delta / 16 * (1 - 3 * e)};
}

/// Closed-form deflections of the two-qubit product scenario; independent
/// of sigma.
template <typename Scalar>
[[nodiscard]] DeflectionTriple<Scalar> closed_form_two_qubit(Scalar delta) {
    if (!(delta >= 0)) {
        throw InvalidArgument("coupling strength must be non-negative");
    }
    return {delta / 4, delta / 4, delta * delta / 16};
}

/// Positive zero of the sequential joint deflection: sigma sqrt(8 ln 3).
template <typename Scalar>
[[nodiscard]] Scalar anomaly_threshold(Scalar sigma) {
    detail::require_positive_sigma(sigma);
    return sigma * std::sqrt(8 * std::log(Scalar(3)));
}

template <typename Scalar = double> struct ReversalPoint {
    Scalar delta;
    Scalar xy;
};

/// Coupling strength of the most negative sequential joint deflection,
/// located by golden-section search on (0, anomaly_threshold).
template <typename Scalar>
[[nodiscard]] ReversalPoint<Scalar> max_reversal_delta(Scalar sigma,
                                                       Scalar tol = 1e-9) {
    const Scalar hi = anomaly_threshold(sigma);
    const auto m = golden_section_minimize(
        [sigma](Scalar d) { return closed_form_sequential(d, sigma).xy_mean; },
        Scalar(0), hi, tol);
    return {m.x, m.fx};
}

} // namespace wmsim
