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
 * Two-level system algebra: polarization states, Hermitian observables,
 * weak values with and without post-selection, and anomaly classification.
 *
 * Basis convention: |0> == |H>, |1> == |V>.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wmsim/errors.hpp"

namespace wmsim {

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar>
using Vector2c = Eigen::Matrix<Complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

/// Numerical thresholds per scalar type: `algebraic` for exact identities on
/// 2x2 systems, `accumulated` for sums of many such terms.
template <typename Scalar> struct Tolerance {
    static constexpr Scalar algebraic = Scalar(1e-12);
    static constexpr Scalar accumulated = Scalar(1e-10);
};

template <> struct Tolerance<float> {
    static constexpr float algebraic = 1e-5f;
    static constexpr float accumulated = 1e-4f;
};

enum class Polarization { H = 0, V = 1 };

/// Normalized polarization state a|H> + b|V>.
template <typename Scalar = double> class QubitState {
    static_assert(std::is_floating_point_v<Scalar>);

  public:
    using ComplexType = Complex<Scalar>;
    using VectorType = Vector2c<Scalar>;

    QubitState(ComplexType amp_h, ComplexType amp_v) : amps_(amp_h, amp_v) {
        if (std::abs(amps_.squaredNorm() - Scalar(1)) >
            Tolerance<Scalar>::algebraic) {
            throw NotNormalized("qubit state is not normalized");
        }
    }

    explicit QubitState(const VectorType &amps)
        : QubitState(amps(0), amps(1)) {}

    /// Rescales (amp_h, amp_v) to unit norm.
    static QubitState normalized(ComplexType amp_h, ComplexType amp_v) {
        const Scalar n = std::sqrt(std::norm(amp_h) + std::norm(amp_v));
        if (!(n > Scalar(0)) || !std::isfinite(n)) {
            throw InvalidArgument("cannot normalize a zero or non-finite "
                                  "qubit vector");
        }
        return QubitState(amp_h / n, amp_v / n);
    }

    static QubitState h() { return {ComplexType(1), ComplexType(0)}; }
    static QubitState v() { return {ComplexType(0), ComplexType(1)}; }

    /// |a1> = 1/2 |H> + sqrt(3)/2 |V>
    static QubitState a1() {
        return {ComplexType(Scalar(0.5)),
                ComplexType(std::numbers::sqrt3_v<Scalar> / 2)};
    }

    /// |a2> = 1/2 |H> - sqrt(3)/2 |V>
    static QubitState a2() {
        return {ComplexType(Scalar(0.5)),
                ComplexType(-std::numbers::sqrt3_v<Scalar> / 2)};
    }

    [[nodiscard]] ComplexType amp_h() const { return amps_(0); }
    [[nodiscard]] ComplexType amp_v() const { return amps_(1); }
    [[nodiscard]] ComplexType amp(Polarization p) const {
        return amps_(static_cast<int>(p));
    }
    [[nodiscard]] const VectorType &vector() const { return amps_; }

    /// <this|other>
    [[nodiscard]] ComplexType inner(const QubitState &other) const {
        return amps_.dot(other.amps_);
    }

  private:
    VectorType amps_;
};

/// Hermitian 2x2 operator.
template <typename Scalar = double> class Observable {
  public:
    using MatrixType = Matrix2c<Scalar>;

    explicit Observable(const MatrixType &m) : m_(m) {
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() >
            Tolerance<Scalar>::algebraic) {
            throw NotHermitian("observable matrix is not Hermitian");
        }
    }

    /// |s><s|
    static Observable projector(const QubitState<Scalar> &s) {
        return Observable(s.vector() * s.vector().adjoint());
    }

    static Observable diagonal(Scalar d0, Scalar d1) {
        MatrixType m = MatrixType::Zero();
        m(0, 0) = d0;
        m(1, 1) = d1;
        return Observable(m);
    }

    static Observable pauli_z() { return diagonal(1, -1); }

    [[nodiscard]] const MatrixType &matrix() const { return m_; }

    /// Ascending eigenvalues (closed form for a 2x2 Hermitian matrix).
    [[nodiscard]] std::pair<Scalar, Scalar> eigenvalues() const {
        const Scalar a = m_(0, 0).real();
        const Scalar d = m_(1, 1).real();
        const Scalar mean = (a + d) / 2;
        const Scalar radius = std::hypot((a - d) / 2, std::abs(m_(0, 1)));
        return {mean - radius, mean + radius};
    }

    [[nodiscard]] bool commutes_with(const Observable &other) const {
        const MatrixType c = m_ * other.m_ - other.m_ * m_;
        return c.cwiseAbs().maxCoeff() <= Tolerance<Scalar>::algebraic;
    }

  private:
    MatrixType m_;
};

template <typename Scalar>
[[nodiscard]] bool is_unitary(const Matrix2c<Scalar> &u,
                              Scalar tol = Tolerance<Scalar>::accumulated) {
    return (u.adjoint() * u - Matrix2c<Scalar>::Identity())
               .cwiseAbs()
               .maxCoeff() <= tol;
}

/// Half-wave plate with its optical axis at `theta_deg` degrees:
/// [[cos 2t, sin 2t], [sin 2t, -cos 2t]]. Hermitian and involutory.
template <typename Scalar = double>
[[nodiscard]] Matrix2c<Scalar> waveplate_hwp(Scalar theta_deg) {
    const Scalar two_theta = 2 * theta_deg * std::numbers::pi_v<Scalar> / 180;
    const Scalar c = std::cos(two_theta);
    const Scalar s = std::sin(two_theta);
    Matrix2c<Scalar> u;
    u << c, s, s, -c;
    return u;
}

template <typename Scalar>
[[nodiscard]] QubitState<Scalar> apply(const Matrix2c<Scalar> &u,
                                       const QubitState<Scalar> &s) {
    if (!is_unitary(u)) {
        throw NonUnitary("polarization transform is not unitary");
    }
    const Vector2c<Scalar> out = u * s.vector();
    return QubitState<Scalar>::normalized(out(0), out(1));
}

/// <post|A|pre> / <post|pre>
template <typename Scalar>
[[nodiscard]] Complex<Scalar> weak_value(const QubitState<Scalar> &pre,
                                         const QubitState<Scalar> &post,
                                         const Observable<Scalar> &a) {
    const Complex<Scalar> overlap = post.inner(pre);
    if (std::abs(overlap) <= Tolerance<Scalar>::algebraic) {
        throw OrthogonalPostselection(
            "post-selected state is orthogonal to the pre-selected state");
    }
    return post.vector().dot(a.matrix() * pre.vector()) / overlap;
}

/// <pre|A|pre>: the weak value without post-selection.
template <typename Scalar>
[[nodiscard]] Complex<Scalar> expectation(const QubitState<Scalar> &pre,
                                          const Observable<Scalar> &a) {
    return pre.vector().dot(a.matrix() * pre.vector());
}

/// (min, max) over all products eta_k(A) * eta_l(B).
template <typename Scalar>
[[nodiscard]] std::pair<Scalar, Scalar>
product_eigen_range(const Observable<Scalar> &a, const Observable<Scalar> &b) {
    const auto [a0, a1] = a.eigenvalues();
    const auto [b0, b1] = b.eigenvalues();
    const std::array<Scalar, 4> products{a0 * b0, a0 * b1, a1 * b0, a1 * b1};
    const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
    return {*lo, *hi};
}

template <typename Scalar = double> struct WeakValueResult {
    Complex<Scalar> value;
    std::pair<Scalar, Scalar> interval;
    bool anomalous;
};

/// A value is anomalous when its real part leaves `interval` by more than
/// the algebraic tolerance.
template <typename Scalar>
[[nodiscard]] WeakValueResult<Scalar>
classify(Complex<Scalar> value, std::pair<Scalar, Scalar> interval) {
    const Scalar eps = Tolerance<Scalar>::algebraic;
    const bool outside = value.real() < interval.first - eps ||
                         value.real() > interval.second + eps;
    return {value, interval, outside};
}

/// Sequential weak value without post-selection, <pre| second * first |pre>,
/// where `first` is the observable measured first.
template <typename Scalar>
[[nodiscard]] WeakValueResult<Scalar>
sequential_weak_value(const QubitState<Scalar> &pre,
                      const Observable<Scalar> &first,
                      const Observable<Scalar> &second) {
    const Complex<Scalar> value =
        pre.vector().dot(second.matrix() * first.matrix() * pre.vector());
    return classify(value, product_eigen_range(first, second));
}

/// One outcome of a projective post-selection: its probability and the
/// conditional weak value, absent when the outcome is orthogonal to the
/// pre-selected state.
template <typename Scalar = double> struct PostselectedTerm {
    Scalar probability;
    std::optional<Complex<Scalar>> weak_value;
};

/// Splits <pre|A|pre> into sum_i |<i|pre>|^2 * A_w(pre -> i) over an
/// orthonormal post-selection basis.
template <typename Scalar>
[[nodiscard]] std::vector<PostselectedTerm<Scalar>>
postselected_decomposition(const QubitState<Scalar> &pre,
                           const Observable<Scalar> &a,
                           const std::array<QubitState<Scalar>, 2> &basis) {
    if (std::abs(basis[0].inner(basis[1])) > Tolerance<Scalar>::algebraic) {
        throw InvalidArgument("post-selection basis is not orthonormal");
    }
    std::vector<PostselectedTerm<Scalar>> terms;
    terms.reserve(basis.size());
    for (const auto &outcome : basis) {
        const Complex<Scalar> amp = outcome.inner(pre);
        if (std::abs(amp) <= Tolerance<Scalar>::algebraic) {
            terms.push_back({Scalar(0), std::nullopt});
        } else {
            terms.push_back({std::norm(amp), weak_value(pre, outcome, a)});
        }
    }
    return terms;
}

} // namespace wmsim
