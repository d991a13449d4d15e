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
#include "wmsim/verification.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "wmsim/experiments.hpp"
#include "wmsim/pointer.hpp"
#include "wmsim/qubit.hpp"

namespace wmsim {

namespace {

/// Published grating calibration in mm per unit of blazing density.
constexpr double kReferenceMmPerUnit = 0.0237;

std::string fmt(const char *pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

CheckResult closed_form_check() {
    const double sigma = kDefaultSigmaMm;
    double worst = 0;
    for (int k = 0; k <= 40; ++k) {
        const double d = 0.711 * k / 40;
        const auto a = analytic_deflection(
            {ScenarioKind::SequentialSingleQubit, sigma}, d);
        const double e = std::exp(-d * d / (8 * sigma * sigma));
        worst = std::max({worst, std::abs(a.x_mean - d / 4),
                          std::abs(a.y_mean - d / 8 * (5 - 3 * e)),
                          std::abs(a.xy_mean - d * d / 16 * (1 - 3 * e))});
    }
    return {"closed-form deflections", worst <= 1e-12,
            fmt("max deviation %.3g", worst)};
}

CheckResult weak_limit_check() {
    const Scenario s{ScenarioKind::SequentialSingleQubit, kDefaultSigmaMm};
    double num = 0;
    double den = 0;
    for (int k = 1; k <= 5; ++k) {
        const double d = 1e-4 * k;
        num += analytic_deflection(s, d).xy_mean * d * d;
        den += d * d * d * d;
    }
    const double slope = num / den;
    const double wv = sequential_weak_value(QubitState<>::a1(),
                                            Observable<>::projector(
                                                QubitState<>::h()),
                                            Observable<>::projector(
                                                QubitState<>::a2()))
                          .value.real();
    const bool ok = std::abs(slope - wv) <= 0.02 * std::abs(wv);
    return {"weak limit", ok,
            fmt("fit %.6f vs weak value %.6f", slope, wv)};
}

CheckResult strong_limit_check() {
    const double sigma = kDefaultSigmaMm;
    const double d = 10 * sigma;
    const double ratio =
        analytic_deflection({ScenarioKind::SequentialSingleQubit, sigma}, d)
            .xy_mean /
        (d * d);
    return {"strong limit",
            std::abs(ratio - 0.0625) <= 0.005 * 0.0625,
            fmt("ratio %.6f", ratio)};
}

CheckResult threshold_check() {
    const Scenario s{ScenarioKind::SequentialSingleQubit, kDefaultSigmaMm};
    SweepSpec spec;
    spec.scenario = s;
    const auto records = run_sweep(spec);
    const double zero = find_zero_crossing(records, s);
    bool signs = true;
    for (const auto &r : records) {
        if (r.delta_mm > 0 && r.delta_mm < zero) {
            signs = signs && r.xy() < 0;
        } else if (r.delta_mm > zero) {
            signs = signs && r.xy() > 0;
        }
    }
    const bool ok = std::abs(zero - anomaly_threshold(s.sigma_mm)) <= 1e-8 &&
                    std::abs(zero - 0.331) <= 1e-3 && signs;
    return {"anomaly boundary", ok, fmt("zero crossing %.6f mm", zero)};
}

CheckResult extremum_check() {
    const double sigma = kDefaultSigmaMm;
    const auto rev = max_reversal_delta(sigma);
    const double t = rev.delta * rev.delta / (8 * sigma * sigma);
    const double stationarity = 3 * std::exp(-t) * (1 - t) - 1;
    const bool ok = std::abs(rev.delta - 1.935 * sigma) <= 1e-4 &&
                    std::abs(t - 0.468) <= 1e-3 &&
                    std::abs(stationarity) <= 1e-6 &&
                    std::abs(rev.delta - 0.189) / 0.189 <= 0.15;
    return {"maximal reversal", ok,
            fmt("delta %.6f mm, t %.6f, vs reported 0.189 mm", rev.delta, t)};
}

CheckResult two_qubit_check(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> delta_dist(0.0, 2.0);
    std::uniform_real_distribution<double> sigma_dist(0.01, 1.0);
    bool ok = true;
    for (int n = 0; n < 1000; ++n) {
        const double d = delta_dist(rng);
        const Scenario s{ScenarioKind::TwoQubitProduct, sigma_dist(rng)};
        const auto a = analytic_deflection(s, d);
        ok = ok && a.xy_mean >= 0 &&
             std::abs(a.xy_mean - d * d / 16) <= 1e-12 &&
             std::abs(a.xy_mean - a.x_mean * a.y_mean) <= 1e-12;
    }
    return {"two-qubit non-negativity", ok, "1000 random (delta, sigma)"};
}

CheckResult engine_check(bool fast) {
    GridSpec grid;
    if (fast) {
        grid.nx = grid.ny = 256;
    }
    const double marginal_tol = fast ? 1e-2 : 1e-3;
    const double joint_tol = fast ? 1e-2 : 1e-4;
    SweepSpec spec;
    spec.steps = 15;
    spec.engines = {true, true};
    spec.grid = grid;
    double worst_marginal = 0;
    double worst_joint = 0;
    for (const auto &r : run_sweep(spec)) {
        worst_marginal =
            std::max({worst_marginal,
                      std::abs(r.grid->x_mean - r.analytic->x_mean),
                      std::abs(r.grid->y_mean - r.analytic->y_mean)});
        worst_joint = std::max(worst_joint, *r.xy_discrepancy);
    }
    return {"grid vs analytic engine",
            worst_marginal <= marginal_tol && worst_joint <= joint_tol,
            fmt("%.0f^2 grid: marginal %.3g mm, joint %.3g mm^2", grid.nx,
                worst_marginal, worst_joint)};
}

CheckResult oracle_check(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> delta_dist(0.0, 2.0);
    std::uniform_real_distribution<double> sigma_dist(0.01, 1.0);
    double worst = 0;
    for (int n = 0; n < 200; ++n) {
        const double d = delta_dist(rng);
        const double s = sigma_dist(rng);
        const auto a = moments(sequential_state(d), s);
        const auto c = closed_form_sequential(d, s);
        worst = std::max({worst, std::abs(a.x_mean - c.x_mean),
                          std::abs(a.y_mean - c.y_mean),
                          std::abs(a.xy_mean - c.xy_mean)});
    }
    return {"superposition calculus vs closed form", worst <= 1e-10,
            fmt("max deviation %.3g", worst)};
}

CheckResult slm_check(bool fast, double mm_per_unit) {
    GridSpec grid;
    if (fast) {
        grid.nx = grid.ny = 256;
    }
    const int alpha = 10;
    const auto start = init_gaussian(grid, kDefaultSigmaMm, QubitState<>::a1());
    auto via_slm = fourier_lens(start);
    via_slm = apply_slm_mask(std::move(via_slm), alpha, Axis::X, mm_per_unit);
    via_slm = fourier_lens(std::move(via_slm));
    const auto via_shift =
        apply_conditional_shift(start, kReferenceMmPerUnit * alpha, Axis::X);
    const double diff =
        std::max((via_slm.h() - via_shift.h()).abs().maxCoeff(),
                 (via_slm.v() - via_shift.v()).abs().maxCoeff());
    return {"SLM grating calibration", diff <= 1e-9,
            fmt("max amplitude difference %.3g", diff)};
}

CheckResult decomposition_check(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    auto state = [&] {
        return QubitState<>::normalized({g(rng), g(rng)}, {g(rng), g(rng)});
    };
    double worst = 0;
    for (int n = 0; n < 1000; ++n) {
        const auto psi = state();
        Matrix2c<double> m;
        m << g(rng), Complex<double>(g(rng), g(rng)), 0, g(rng);
        m(1, 0) = std::conj(m(0, 1));
        const Observable<> a(m);
        const auto b0 = state();
        const auto b1 = QubitState<>::normalized(-std::conj(b0.amp_v()),
                                                 std::conj(b0.amp_h()));
        Complex<double> sum = 0;
        for (const auto &term : postselected_decomposition(psi, a, {b0, b1})) {
            if (term.weak_value) {
                sum += term.probability * *term.weak_value;
            }
        }
        worst = std::max(worst, std::abs(sum - expectation(psi, a)));
    }
    return {"post-selection decomposition identity", worst <= 1e-10,
            fmt("max deviation %.3g", worst)};
}

CheckResult lobe_check(bool fast) {
    GridSpec grid;
    if (fast) {
        // A shift of 10 sigma needs an extent above 40 sigma.
        grid = GridSpec{256, 256, 27.0};
    }
    const double sigma = kDefaultSigmaMm;
    const double d = 10 * sigma;
    const auto img = simulate_image(
        {ScenarioKind::SequentialSingleQubit, sigma}, grid, d);
    double w[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < grid.ny; ++i) {
        for (int j = 0; j < grid.nx; ++j) {
            w[grid.x_mm(j) > d / 2][grid.y_mm(i) > d / 2] += img.values()(i, j);
        }
    }
    const double total = img.values().sum();
    // [x shifted][y shifted]
    const double expected[2][2] = {{3.0 / 16, 9.0 / 16}, {3.0 / 16, 1.0 / 16}};
    double worst = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            worst = std::max(worst, std::abs(w[a][b] / total - expected[a][b]) /
                                        expected[a][b]);
        }
    }
    return {"four-lobe image weights", worst <= 0.01,
            fmt("max relative deviation %.3g", worst)};
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions &opts) {
    std::mt19937_64 rng(opts.seed);
    const std::vector<std::pair<const char *, std::function<CheckResult()>>>
        checks{
            {"closed-form deflections", closed_form_check},
            {"weak limit", weak_limit_check},
            {"strong limit", strong_limit_check},
            {"anomaly boundary", threshold_check},
            {"maximal reversal", extremum_check},
            {"two-qubit non-negativity", [&] { return two_qubit_check(rng); }},
            {"grid vs analytic engine", [&] { return engine_check(opts.fast); }},
            {"superposition calculus vs closed form",
             [&] { return oracle_check(rng); }},
            {"SLM grating calibration",
             [&] { return slm_check(opts.fast, opts.slm_mm_per_unit); }},
            {"post-selection decomposition identity",
             [&] { return decomposition_check(rng); }},
            {"four-lobe image weights", [&] { return lobe_check(opts.fast); }},
        };
    std::vector<CheckResult> out;
    out.reserve(checks.size());
    for (const auto &[name, check] : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception &e) {
            out.push_back({name, false, e.what()});
        }
    }
    return out;
}

} // namespace wmsim
