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
#include "wmsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "wmsim/errors.hpp"
#include "wmsim/image_io.hpp"
#include "wmsim/scalar_search.hpp"

namespace wmsim {

namespace {

std::string format_number(double v) {
    if (v == 0) {
        return "0";
    }
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), ptr};
}

double parse_number(std::string_view field) {
    double v = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw FormatError("bad number in CSV: '" + std::string(field) + "'");
    }
    return v;
}

/// Runs the optical train of `scenario` on one photon whose couplings are
/// applied by `kick(field, axis)` in the focal plane.
template <typename Kick>
PolarizedField single_photon_train(const Scenario &scenario,
                                   const GridSpec &grid, Axis axis,
                                   Kick &&kick) {
    auto field = init_gaussian(grid, scenario.sigma_mm, QubitState<>::h());
    field = apply_polarization_unitary(std::move(field),
                                       waveplate_hwp(scenario.prep_hwp_deg));
    field = fourier_lens(std::move(field));
    field = kick(std::move(field), axis);
    return fourier_lens(std::move(field));
}

template <typename Kick>
IntensityImage train_image(const Scenario &scenario, const GridSpec &grid,
                           Kick &&kick) {
    switch (scenario.kind) {
    case ScenarioKind::SingleCoupling:
        return intensity(single_photon_train(scenario, grid, Axis::X, kick));
    case ScenarioKind::TwoQubitProduct:
        return coincidence_image(
            intensity(single_photon_train(scenario, grid, Axis::X, kick)),
            intensity(single_photon_train(scenario, grid, Axis::Y, kick)));
    case ScenarioKind::SequentialSingleQubit:
        break;
    }
    auto field = single_photon_train(scenario, grid, Axis::X, kick);
    field = apply_polarization_unitary(std::move(field),
                                       waveplate_hwp(scenario.mid_hwp_deg));
    field = fourier_lens(std::move(field));
    field = kick(std::move(field), Axis::Y);
    return intensity(fourier_lens(std::move(field)));
}

void require_sigma(const Scenario &scenario) {
    detail::require_positive_sigma(scenario.sigma_mm);
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::SequentialSingleQubit:
        return "sequential";
    case ScenarioKind::TwoQubitProduct:
        return "two-qubit";
    case ScenarioKind::SingleCoupling:
        return "single";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    for (const auto kind :
         {ScenarioKind::SequentialSingleQubit, ScenarioKind::TwoQubitProduct,
          ScenarioKind::SingleCoupling}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
    require_sigma(scenario);
    if (!(delta_start_mm >= 0) || !(delta_end_mm > delta_start_mm)) {
        throw InvalidArgument("sweep needs 0 <= delta_start < delta_end");
    }
    if (steps < 2) {
        throw InvalidArgument("sweep needs at least 2 steps");
    }
    if (!engines.analytic && !engines.grid) {
        throw InvalidArgument("sweep needs at least one engine");
    }
    if (engines.grid) {
        grid.validate();
    }
}

std::vector<double> SweepSpec::deltas() const {
    std::vector<double> out(static_cast<std::size_t>(steps));
    const double span = delta_end_mm - delta_start_mm;
    for (int k = 0; k < steps; ++k) {
        out[static_cast<std::size_t>(k)] =
            delta_start_mm + span * k / (steps - 1);
    }
    out.back() = delta_end_mm;
    return out;
}

double SweepRecord::xy() const {
    if (analytic) {
        return analytic->xy_mean;
    }
    if (grid) {
        return grid->xy_mean;
    }
    throw InvalidArgument("sweep record carries no engine result");
}

DeflectionTriple<double> analytic_deflection(const Scenario &scenario,
                                             double delta_mm) {
    require_sigma(scenario);
    switch (scenario.kind) {
    case ScenarioKind::SequentialSingleQubit:
        return moments(sequential_state(delta_mm, scenario.prep_hwp_deg,
                                        scenario.mid_hwp_deg),
                       scenario.sigma_mm);
    case ScenarioKind::TwoQubitProduct:
        return two_qubit_moments(delta_mm, scenario.sigma_mm,
                                 scenario.prep_hwp_deg);
    case ScenarioKind::SingleCoupling:
        return moments(
            single_coupling_state(delta_mm, Axis::X, scenario.prep_hwp_deg),
            scenario.sigma_mm);
    }
    throw InvalidArgument("unknown scenario kind");
}

IntensityImage simulate_image(const Scenario &scenario, const GridSpec &grid,
                              double delta_mm) {
    if (!(delta_mm >= 0)) {
        throw InvalidArgument("coupling strength must be non-negative");
    }
    const double quarter = std::min(grid.extent_x_mm(), grid.extent_y_mm()) / 4;
    if (!(delta_mm < quarter)) {
        throw ShiftTooLarge("shift must be below a quarter of the grid extent");
    }
    return train_image(scenario, grid,
                       [delta_mm](PolarizedField f, Axis axis) {
                           return apply_phase_ramp(std::move(f), delta_mm,
                                                   axis);
                       });
}

IntensityImage simulate_image_slm(const Scenario &scenario,
                                  const GridSpec &grid, int alpha,
                                  double mm_per_unit) {
    return train_image(scenario, grid,
                       [alpha, mm_per_unit](PolarizedField f, Axis axis) {
                           return apply_slm_mask(std::move(f), alpha, axis,
                                                 mm_per_unit);
                       });
}

DeflectionTriple<double> grid_deflection(const Scenario &scenario,
                                         const GridSpec &grid,
                                         double delta_mm) {
    return discrete_means(simulate_image(scenario, grid, delta_mm));
}

std::vector<SweepRecord> run_sweep(const SweepSpec &spec) {
    spec.validate();
    const std::vector<double> deltas = spec.deltas();
    std::vector<SweepRecord> records(deltas.size());
    std::vector<std::exception_ptr> failures(deltas.size());

    auto evaluate = [&](std::size_t k) {
        SweepRecord &r = records[k];
        r.delta_mm = deltas[k];
        try {
            if (spec.engines.analytic) {
                r.analytic = analytic_deflection(spec.scenario, r.delta_mm);
            }
            if (spec.engines.grid) {
                r.grid = grid_deflection(spec.scenario, spec.grid, r.delta_mm);
            }
            if (r.analytic && r.grid) {
                r.xy_discrepancy =
                    std::abs(r.grid->xy_mean - r.analytic->xy_mean);
            }
        } catch (...) {
            failures[k] = std::current_exception();
        }
    };

    unsigned workers = spec.threads != 0 ? spec.threads
                                         : std::thread::hardware_concurrency();
    if (!spec.engines.grid) {
        workers = 1;
    }
    workers = std::clamp<unsigned>(workers, 1u,
                                   static_cast<unsigned>(deltas.size()));
    if (workers == 1) {
        for (std::size_t k = 0; k < deltas.size(); ++k) {
            evaluate(k);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < deltas.size(); k = next++) {
                    evaluate(k);
                }
            });
        }
    }

    for (std::size_t k = 0; k < deltas.size(); ++k) {
        if (!failures[k]) {
            continue;
        }
        try {
            std::rethrow_exception(failures[k]);
        } catch (const std::exception &e) {
            throw SweepError(deltas[k], e.what());
        }
    }
    return records;
}

double find_zero_crossing(std::span<const SweepRecord> records,
                          const Scenario &scenario) {
    for (std::size_t k = 0; k + 1 < records.size(); ++k) {
        const double a = records[k].xy();
        const double b = records[k + 1].xy();
        if (a == 0 || !((a < 0) != (b < 0))) {
            continue;
        }
        return bisect_root(
            [&](double d) { return analytic_deflection(scenario, d).xy_mean; },
            records[k].delta_mm, records[k + 1].delta_mm, 1e-9);
    }
    throw NoSignChange("joint deflection keeps its sign over the sweep");
}

Extremum find_extremum(std::span<const SweepRecord> records,
                       const Scenario &scenario) {
    if (records.size() < 3) {
        throw NoInteriorExtremum("need at least three records");
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < records.size(); ++k) {
        if (records[k].xy() < records[best].xy()) {
            best = k;
        }
    }
    if (best == 0 || best + 1 == records.size()) {
        throw NoInteriorExtremum("joint deflection has no interior minimum");
    }
    const auto m = golden_section_minimize(
        [&](double d) { return analytic_deflection(scenario, d).xy_mean; },
        records[best - 1].delta_mm, records[best + 1].delta_mm, 1e-9);
    return {m.x, m.fx};
}

double infer_sigma_from_threshold(double delta_star_mm) {
    if (!(delta_star_mm > 0)) {
        throw InvalidArgument("threshold must be positive");
    }
    return delta_star_mm / std::sqrt(8 * std::log(3.0));
}

std::string export_csv(std::span<const SweepRecord> records) {
    std::string out(kCsvHeader);
    out += '\n';
    auto triple = [&out](const std::optional<DeflectionTriple<double>> &t) {
        if (t) {
            out += ',' + format_number(t->x_mean) + ',' +
                   format_number(t->y_mean) + ',' + format_number(t->xy_mean);
        } else {
            out += ",,,";
        }
    };
    for (const SweepRecord &r : records) {
        out += format_number(r.delta_mm);
        triple(r.analytic);
        triple(r.grid);
        out += ',';
        if (r.xy_discrepancy) {
            out += format_number(*r.xy_discrepancy);
        }
        out += '\n';
    }
    return out;
}

void export_csv(std::span<const SweepRecord> records,
                const std::filesystem::path &destination) {
    write_file(destination, export_csv(records));
}

std::vector<SweepRecord> parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{}
                                            : text.substr(nl + 1);
    }
    if (lines.empty() || lines.front() != kCsvHeader) {
        throw FormatError("CSV header mismatch");
    }
    std::vector<SweepRecord> records;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        std::vector<std::string_view> f;
        std::string_view line = lines[n];
        for (;;) {
            const std::size_t c = line.find(',');
            f.push_back(line.substr(0, c));
            if (c == std::string_view::npos) {
                break;
            }
            line = line.substr(c + 1);
        }
        if (f.size() != 8) {
            throw FormatError("CSV row " + std::to_string(n) +
                              " does not have 8 fields");
        }
        SweepRecord r;
        r.delta_mm = parse_number(f[0]);
        auto triple = [&f](std::size_t at)
            -> std::optional<DeflectionTriple<double>> {
            if (f[at].empty() && f[at + 1].empty() && f[at + 2].empty()) {
                return std::nullopt;
            }
            return DeflectionTriple<double>{parse_number(f[at]),
                                            parse_number(f[at + 1]),
                                            parse_number(f[at + 2])};
        };
        r.analytic = triple(1);
        r.grid = triple(4);
        if (!f[7].empty()) {
            r.xy_discrepancy = parse_number(f[7]);
        }
        records.push_back(r);
    }
    return records;
}

std::string sweep_metadata(const SweepSpec &spec, bool sigma_is_default) {
    std::ostringstream os;
    os << "scenario=" << to_string(spec.scenario.kind) << '\n'
       << "sigma_mm=" << format_number(spec.scenario.sigma_mm) << '\n'
       << "sigma_source="
       << (sigma_is_default ? "derived from 0.331 mm anomaly boundary"
                            : "user supplied")
       << '\n'
       << "prep_hwp_deg=" << format_number(spec.scenario.prep_hwp_deg) << '\n'
       << "mid_hwp_deg=" << format_number(spec.scenario.mid_hwp_deg) << '\n'
       << "delta_range_mm=" << format_number(spec.delta_start_mm) << ':'
       << format_number(spec.delta_end_mm) << ':' << spec.steps << '\n'
       << "grid=" << spec.grid.nx << 'x' << spec.grid.ny << '@'
       << format_number(spec.grid.pixel_um) << "um\n"
       << "engines=";
    if (spec.engines.analytic) {
        os << "analytic";
    }
    if (spec.engines.analytic && spec.engines.grid) {
        os << ',';
    }
    if (spec.engines.grid) {
        os << "grid";
    }
    os << '\n' << "tool_version=" << kVersion << '\n';
    return os.str();
}

} // namespace wmsim
