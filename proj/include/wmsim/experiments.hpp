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
 * Measurement scenarios, coupling-strength sweeps over the analytic and grid
 * engines, feature extraction and CSV export.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wmsim/grid.hpp"
#include "wmsim/pointer.hpp"

namespace wmsim {

inline constexpr std::string_view kVersion = "0.1.0";

/// Pointer width that puts the anomaly boundary at 0.331 mm. Derived, not a
/// measured beam size.
inline constexpr double kDefaultSigmaMm = 0.1116;

enum class ScenarioKind { SequentialSingleQubit, TwoQubitProduct, SingleCoupling };

[[nodiscard]] std::string_view to_string(ScenarioKind kind);
/// Accepts "sequential", "two-qubit" and "single".
[[nodiscard]] ScenarioKind parse_scenario_kind(std::string_view name);

struct Scenario {
    ScenarioKind kind = ScenarioKind::SequentialSingleQubit;
    double sigma_mm = kDefaultSigmaMm;
    double prep_hwp_deg = kPrepHwpDeg;
    double mid_hwp_deg = kMidHwpDeg;
};

struct EngineSet {
    bool analytic = true;
    bool grid = false;
};

struct SweepSpec {
    Scenario scenario;
    double delta_start_mm = 0.0;
    double delta_end_mm = 0.711;
    int steps = 31;
    EngineSet engines;
    GridSpec grid;
    /// Worker threads for grid points; 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
    /// Uniform, ascending, both endpoints included.
    [[nodiscard]] std::vector<double> deltas() const;
};

struct SweepRecord {
    double delta_mm = 0.0;
    std::optional<DeflectionTriple<double>> analytic;
    std::optional<DeflectionTriple<double>> grid;
    /// |xy_grid - xy_analytic|, present iff both engines ran.
    std::optional<double> xy_discrepancy;

    /// The analytic joint mean when present, else the grid one.
    [[nodiscard]] double xy() const;
};

/// Deflections from the Gaussian-superposition calculus.
[[nodiscard]] DeflectionTriple<double>
analytic_deflection(const Scenario &scenario, double delta_mm);

/// Simulated camera image after the scenario's optical train, the couplings
/// realized as focal-plane phase ramps of strength `delta_mm`. Two-qubit
/// scenarios yield the coincidence distribution of the two photons.
[[nodiscard]] IntensityImage simulate_image(const Scenario &scenario,
                                            const GridSpec &grid,
                                            double delta_mm);

/// As simulate_image, with each coupling driven by a blazed grating of
/// density `alpha`.
[[nodiscard]] IntensityImage
simulate_image_slm(const Scenario &scenario, const GridSpec &grid, int alpha,
                   double mm_per_unit = kSlmMmPerUnit);

[[nodiscard]] DeflectionTriple<double>
grid_deflection(const Scenario &scenario, const GridSpec &grid,
                double delta_mm);

/// Runs every requested engine at every delta of the sweep. Engine failures
/// surface as SweepError carrying the offending delta.
[[nodiscard]] std::vector<SweepRecord> run_sweep(const SweepSpec &spec);

/// Coupling strength where the joint deflection changes sign, refined by
/// bisection on the analytic engine between the bracketing records.
[[nodiscard]] double find_zero_crossing(std::span<const SweepRecord> records,
                                        const Scenario &scenario);

struct Extremum {
    double delta_mm;
    double xy_mm2;
};

/// Interior minimum of the joint deflection, refined by golden-section
/// search on the analytic engine.
[[nodiscard]] Extremum find_extremum(std::span<const SweepRecord> records,
                                     const Scenario &scenario);

/// sigma such that anomaly_threshold(sigma) == delta_star.
[[nodiscard]] double infer_sigma_from_threshold(double delta_star_mm);

inline constexpr std::string_view kCsvHeader =
    "delta_mm,x_analytic_mm,y_analytic_mm,xy_analytic_mm2,x_grid_mm,"
    "y_grid_mm,xy_grid_mm2,xy_discrepancy_mm2";

[[nodiscard]] std::string export_csv(std::span<const SweepRecord> records);
void export_csv(std::span<const SweepRecord> records,
                const std::filesystem::path &destination);
[[nodiscard]] std::vector<SweepRecord> parse_csv(std::string_view text);

/// Plain-text key=value description of a sweep for the sidecar file.
[[nodiscard]] std::string sweep_metadata(const SweepSpec &spec,
                                         bool sigma_is_default);

} // namespace wmsim
