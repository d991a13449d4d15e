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
 * Command-line front end: `weak-value`, `sweep`, `image` and `verify`.
 *
 * Exit codes: 0 success, 2 usage, 3 undefined weak value, 4 engine failure,
 * 5 verification failure.
 */
#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wmsim/qubit.hpp"

namespace wmsim::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kUndefinedWeakValue = 3,
    kEngineFailure = 4,
    kVerificationFailed = 5,
};

/// Malformed command-line input; maps to exit code 2.
class UsageError : public Error {
  public:
    using Error::Error;
};

/// "0.1116mm", "13.5um" -> millimetres. The unit suffix is mandatory.
[[nodiscard]] double parse_length_mm(std::string_view text);

/// "re", "imi", "re+imi", "re-imi".
[[nodiscard]] std::complex<double> parse_complex(std::string_view text);

/// Named state (H, V, a1, a2) or "amp_h,amp_v".
[[nodiscard]] QubitState<> parse_state(std::string_view text);

/// "proj:<state>" or four comma-separated matrix entries m00,m01,m10,m11.
[[nodiscard]] Observable<> parse_observable(std::string_view text);

struct DeltaRange {
    double start_mm;
    double end_mm;
    int steps;
};

/// "start:end:steps"; bare endpoints are millimetres.
[[nodiscard]] DeltaRange parse_delta_range(std::string_view text);

/// `key = value` lines with `#` comments. Command-line flags take precedence
/// over file values, which take precedence over built-in defaults.
struct CliConfig {
    std::map<std::string, std::string> values;

    [[nodiscard]] static CliConfig parse(std::string_view text);
    [[nodiscard]] static CliConfig load(const std::filesystem::path &path);
};

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace wmsim::cli
