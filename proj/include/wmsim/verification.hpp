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

#include <cstdint>
#include <string>
#include <vector>

#include "wmsim/grid.hpp"

namespace wmsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Use 256x256 grids and the looser 1e-2 grid tolerance.
    bool fast = false;
    /// Grating calibration fed to the SLM path; overridable so a corrupted
    /// constant can be shown to fail.
    double slm_mm_per_unit = kSlmMmPerUnit;
    std::uint64_t seed = 20210607;
};

/// Runs the reproduction checks (formulas, limits, anomaly region,
/// extremum, two-qubit non-negativity, engine and oracle equivalence, SLM
/// calibration, decomposition identity, image lobes) in order.
[[nodiscard]] std::vector<CheckResult> run_verification(const VerifyOptions &opts);

} // namespace wmsim
