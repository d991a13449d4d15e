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
#pragma once

#include <cmath>
#include <concepts>
#include <utility>

#include "wmsim/errors.hpp"

namespace wmsim {

template <typename Scalar> struct ScalarMinimum {
    Scalar x;
    Scalar fx;
};

/// Golden-section search for the minimum of a unimodal `f` on [lo, hi].
/// Stops once the bracket is narrower than `tol`.
template <typename Scalar, std::invocable<Scalar> F>
[[nodiscard]] ScalarMinimum<Scalar> golden_section_minimize(F &&f, Scalar lo,
                                                            Scalar hi,
                                                            Scalar tol) {
    if (!(hi > lo) || !(tol > 0)) {
        throw InvalidArgument("golden section needs lo < hi and tol > 0");
    }
    // 1/phi
    const Scalar r = (std::sqrt(Scalar(5)) - 1) / 2;
    Scalar a = lo;
    Scalar b = hi;
    Scalar c = b - r * (b - a);
    Scalar d = a + r * (b - a);
    Scalar fc = f(c);
    Scalar fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    const Scalar x = (a + b) / 2;
    return {x, f(x)};
}

/// Bisection for a root of `f` on [lo, hi]; f(lo) and f(hi) must differ in
/// sign.
template <typename Scalar, std::invocable<Scalar> F>
[[nodiscard]] Scalar bisect_root(F &&f, Scalar lo, Scalar hi, Scalar tol) {
    Scalar flo = f(lo);
    const Scalar fhi = f(hi);
    if (flo == Scalar(0)) {
        return lo;
    }
    if (fhi == Scalar(0)) {
        return hi;
    }
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NoSignChange("bisection bracket does not change sign");
    }
    while (hi - lo > tol) {
        const Scalar mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const Scalar fmid = f(mid);
        if (fmid == Scalar(0)) {
            return mid;
        }
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2;
}

} // namespace wmsim
