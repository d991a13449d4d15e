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
#include "wmsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wmsim/errors.hpp"
#include "wmsim/experiments.hpp"
#include "wmsim/image_io.hpp"
#include "wmsim/verification.hpp"

namespace wmsim::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0;
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw UsageError("cannot parse " + std::string(what) + " '" +
                         std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto k = s.find(sep);
        out.push_back(s.substr(0, k));
        if (k == std::string_view::npos) {
            return out;
        }
        s = s.substr(k + 1);
    }
}

/// Up to 12 significant digits; rounding dust below 1e-14 prints as 0.
std::string format_real(double v) {
    if (std::abs(v) < 1e-14) {
        v = 0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string format_complex(std::complex<double> z) {
    const std::string im = format_real(z.imag());
    return format_real(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

std::string report_line(const WeakValueResult<double> &r) {
    return "value = " + format_complex(r.value) + "  interval=[" +
           format_real(r.interval.first) + "," +
           format_real(r.interval.second) + "]  " +
           (r.anomalous ? "ANOMALOUS" : "not anomalous");
}

/// Inserts config-file values as flags for every option of `sub` not
/// already given on the command line.
std::vector<std::string> overlay_config(const std::vector<std::string> &args,
                                        const CLI::App &sub,
                                        const CliConfig &config) {
    std::map<std::string, const CLI::Option *> known;
    for (const CLI::Option *opt : sub.get_options()) {
        if (opt->get_lnames().empty()) {
            continue;
        }
        const std::string &name = opt->get_lnames().front();
        if (name != "help" && name != "config") {
            known[name] = opt;
        }
    }
    auto given = [&args](const std::string &name) {
        const std::string flag = "--" + name;
        for (const auto &a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                return true;
            }
        }
        return false;
    };
    std::vector<std::string> extra;
    for (const auto &[key, value] : config.values) {
        const auto it = known.find(key);
        if (it == known.end()) {
            throw UsageError("unknown config key '" + key + "' for " +
                             sub.get_name());
        }
        if (given(key)) {
            continue;
        }
        if (it->second->get_type_size() == 0) {
            if (value == "true") {
                extra.push_back("--" + key);
            } else if (value != "false") {
                throw UsageError("config key '" + key +
                                 "' expects true or false");
            }
        } else {
            extra.push_back("--" + key + "=" + value);
        }
    }
    std::vector<std::string> merged;
    merged.reserve(args.size() + extra.size());
    bool inserted = false;
    for (const auto &a : args) {
        merged.push_back(a);
        if (!inserted && a == sub.get_name()) {
            merged.insert(merged.end(), extra.begin(), extra.end());
            inserted = true;
        }
    }
    return merged;
}

std::optional<std::string> find_config_path(const std::vector<std::string> &args) {
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            return args[k + 1];
        }
        if (args[k].rfind("--config=", 0) == 0) {
            return args[k].substr(9);
        }
    }
    return std::nullopt;
}

GridSpec make_grid(int size, const std::string &pixel) {
    GridSpec g;
    g.nx = g.ny = size;
    g.pixel_um = parse_length_mm(pixel) * 1e3;
    try {
        g.validate();
    } catch (const InvalidArgument &e) {
        throw UsageError(e.what());
    }
    return g;
}

/// Runs `parse`, prefixing any UsageError with the flag it came from.
template <typename F> auto for_flag(std::string_view flag, F &&parse) {
    try {
        return parse();
    } catch (const UsageError &e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv) {
    std::filesystem::path p = csv;
    p += ".meta";
    return p;
}

} // namespace

double parse_length_mm(std::string_view text) {
    text = trim(text);
    struct Unit {
        std::string_view suffix;
        double to_mm;
    };
    for (const Unit u : {Unit{"mm", 1.0}, Unit{"um", 1e-3},
                         Unit{"\xC2\xB5m", 1e-3}, Unit{"\xCE\xBCm", 1e-3}}) {
        if (text.size() > u.suffix.size() && text.ends_with(u.suffix)) {
            return parse_double(text.substr(0, text.size() - u.suffix.size()),
                                "length") *
                   u.to_mm;
        }
    }
    throw UsageError("length '" + std::string(text) +
                     "' needs a unit suffix (mm or um)");
}

std::complex<double> parse_complex(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw UsageError("empty complex number");
    }
    if (text.back() != 'i') {
        return {parse_double(text, "complex number"), 0.0};
    }
    const std::string_view body = text.substr(0, text.size() - 1);
    std::size_t split_at = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' &&
            body[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    auto imag_part = [](std::string_view s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        if (s.front() == '+') {
            s.remove_prefix(1);
        }
        return parse_double(s, "imaginary part");
    };
    if (split_at == std::string_view::npos) {
        return {0.0, imag_part(body)};
    }
    return {parse_double(body.substr(0, split_at), "real part"),
            imag_part(body.substr(split_at))};
}

QubitState<> parse_state(std::string_view text) {
    text = trim(text);
    if (text == "H" || text == "h" || text == "0") {
        return QubitState<>::h();
    }
    if (text == "V" || text == "v" || text == "1") {
        return QubitState<>::v();
    }
    if (text == "a1") {
        return QubitState<>::a1();
    }
    if (text == "a2") {
        return QubitState<>::a2();
    }
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw UsageError("state '" + std::string(text) +
                         "' is neither H, V, a1, a2 nor 'amp_h,amp_v'");
    }
    const auto h = parse_complex(parts[0]);
    const auto v = parse_complex(parts[1]);
    if (std::abs(std::norm(h) + std::norm(v) - 1.0) > 1e-6) {
        throw UsageError("state '" + std::string(text) + "' is not normalized");
    }
    return QubitState<>::normalized(h, v);
}

Observable<> parse_observable(std::string_view text) {
    text = trim(text);
    if (text.starts_with("proj:")) {
        return Observable<>::projector(parse_state(text.substr(5)));
    }
    const auto parts = split(text, ',');
    if (parts.size() != 4) {
        throw UsageError("observable '" + std::string(text) +
                         "' is neither proj:<state> nor four matrix entries");
    }
    Matrix2c<double> m;
    m << parse_complex(parts[0]), parse_complex(parts[1]),
        parse_complex(parts[2]), parse_complex(parts[3]);
    try {
        return Observable<>(m);
    } catch (const NotHermitian &) {
        throw UsageError("observable '" + std::string(text) +
                         "' is not Hermitian");
    }
}

DeltaRange parse_delta_range(std::string_view text) {
    const auto parts = split(trim(text), ':');
    if (parts.size() != 3) {
        throw UsageError("delta range '" + std::string(text) +
                         "' must be start:end:steps");
    }
    auto endpoint = [](std::string_view s) {
        s = trim(s);
        if (!s.empty() && s.back() == 'm') {
            return parse_length_mm(s);
        }
        return parse_double(s, "delta range endpoint");
    };
    int steps = 0;
    const auto [ptr, ec] = std::from_chars(
        parts[2].data(), parts[2].data() + parts[2].size(), steps);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size()) {
        throw UsageError("bad step count in delta range '" +
                         std::string(text) + "'");
    }
    return {endpoint(parts[0]), endpoint(parts[1]), steps};
}

CliConfig CliConfig::parse(std::string_view text) {
    CliConfig cfg;
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) +
                             ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw UsageError("config line " + std::to_string(line_no) +
                             ": empty key");
        }
        cfg.values[std::string(key)] = std::string(value);
    }
    return cfg;
}

CliConfig CliConfig::load(const std::filesystem::path &path) {
    try {
        return parse(read_file(path));
    } catch (const IoError &e) {
        throw UsageError(e.what());
    }
}

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
    CLI::App app{"Sequential weak-measurement simulator", "wmsim"};
    app.require_subcommand(1);
    std::string config_path;

    // weak-value
    auto *wv = app.add_subcommand(
        "weak-value", "Weak value, expectation or sequential weak value");
    std::string pre, post, a_spec, first_spec, second_spec;
    wv->add_option("--pre", pre, "Pre-selected state")->required();
    wv->add_option("--post", post, "Post-selected state");
    wv->add_option("--a", a_spec, "Observable for a single weak value");
    wv->add_option("--first", first_spec, "First-measured observable");
    wv->add_option("--second", second_spec, "Second-measured observable");

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Coupling-strength sweep to CSV");
    std::string scenario_name = "sequential";
    std::string sigma_text;
    std::string range_text = "0:0.711:31";
    std::string engine_name = "analytic";
    std::string out_path;
    int grid_size = 1024;
    std::string pixel_text = "13.5um";
    unsigned threads = 0;
    sweep->add_option("--scenario", scenario_name, "sequential|two-qubit|single")
        ->check(CLI::IsMember({"sequential", "two-qubit", "single"}));
    sweep->add_option("--sigma", sigma_text, "Pointer width, e.g. 0.1116mm");
    sweep->add_option("--delta-range", range_text, "start:end:steps in mm");
    sweep->add_option("--engine", engine_name, "analytic|grid|both")
        ->check(CLI::IsMember({"analytic", "grid", "both"}));
    sweep->add_option("--out", out_path, "CSV destination")->required();
    sweep->add_option("--grid-size", grid_size, "Grid points per axis");
    sweep->add_option("--pixel", pixel_text, "Pixel pitch, e.g. 13.5um");
    sweep->add_option("--threads", threads, "Worker threads (0 = auto)");

    // image
    auto *image = app.add_subcommand("image", "Simulated camera image as PGM");
    std::string delta_text;
    int alpha = 0;
    std::string raw_path;
    std::string image_scenario = "sequential";
    auto *delta_opt =
        image->add_option("--delta", delta_text, "Coupling strength, e.g. 0.2mm");
    auto *alpha_opt =
        image->add_option("--alpha", alpha, "Grating density (delta = 0.0237 mm * alpha)")
            ->check(CLI::NonNegativeNumber);
    delta_opt->excludes(alpha_opt);
    image->add_option("--scenario", image_scenario, "sequential|two-qubit|single")
        ->check(CLI::IsMember({"sequential", "two-qubit", "single"}));
    image->add_option("--sigma", sigma_text, "Pointer width, e.g. 0.1116mm");
    image->add_option("--out", out_path, "PGM destination")->required();
    image->add_option("--raw", raw_path, "Optional raw float64 dump");
    image->add_option("--grid-size", grid_size, "Grid points per axis");
    image->add_option("--pixel", pixel_text, "Pixel pitch, e.g. 13.5um");

    // verify
    auto *verify = app.add_subcommand("verify", "Run the reproduction checks");
    bool fast = false;
    double slm_k = kSlmMmPerUnit;
    verify->add_flag("--fast", fast, "Use 256x256 grids");
    verify->add_option("--override-slm-k", slm_k)->group("");

    for (auto *sub : {wv, sweep, image, verify}) {
        sub->add_option("--config", config_path, "key = value defaults file");
    }

    try {
        std::vector<std::string> argv_store{"wmsim"};
        std::vector<std::string> effective = args;
        if (const auto cfg_path = find_config_path(args)) {
            const CliConfig cfg = CliConfig::load(*cfg_path);
            for (const auto &a : args) {
                if (!a.starts_with("-")) {
                    effective = overlay_config(args, *app.get_subcommand(a), cfg);
                    break;
                }
            }
        }
        argv_store.insert(argv_store.end(), effective.begin(), effective.end());
        std::vector<char *> argv;
        for (auto &s : argv_store) {
            argv.push_back(s.data());
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kUsage;
        }

        const double sigma_mm =
            sigma_text.empty()
                ? kDefaultSigmaMm
                : for_flag("--sigma", [&] { return parse_length_mm(sigma_text); });

        if (wv->parsed()) {
            const auto psi = for_flag("--pre", [&] { return parse_state(pre); });
            const bool sequential = !first_spec.empty() || !second_spec.empty();
            if (sequential == !a_spec.empty()) {
                throw UsageError("give either --a or both --first and --second");
            }
            if (sequential) {
                if (first_spec.empty() || second_spec.empty()) {
                    throw UsageError("--first and --second go together");
                }
                if (!post.empty()) {
                    throw UsageError("--post applies only with --a");
                }
                const auto first = for_flag(
                    "--first", [&] { return parse_observable(first_spec); });
                const auto second = for_flag(
                    "--second", [&] { return parse_observable(second_spec); });
                out << report_line(sequential_weak_value(psi, first, second))
                    << '\n';
                return kOk;
            }
            const auto a =
                for_flag("--a", [&] { return parse_observable(a_spec); });
            const auto value =
                post.empty()
                    ? expectation(psi, a)
                    : weak_value(psi,
                                 for_flag("--post",
                                          [&] { return parse_state(post); }),
                                 a);
            out << report_line(classify(value, a.eigenvalues())) << '\n';
            return kOk;
        }

        if (sweep->parsed()) {
            SweepSpec spec;
            spec.scenario.kind = parse_scenario_kind(scenario_name);
            spec.scenario.sigma_mm = sigma_mm;
            const auto range = for_flag(
                "--delta-range", [&] { return parse_delta_range(range_text); });
            spec.delta_start_mm = range.start_mm;
            spec.delta_end_mm = range.end_mm;
            spec.steps = range.steps;
            spec.engines = {engine_name != "grid", engine_name != "analytic"};
            spec.grid = for_flag("--pixel",
                                 [&] { return make_grid(grid_size, pixel_text); });
            spec.threads = threads;
            try {
                spec.validate();
            } catch (const InvalidArgument &e) {
                throw UsageError(e.what());
            }
            const auto records = run_sweep(spec);
            export_csv(records, out_path);
            write_file(sidecar_path(out_path),
                       sweep_metadata(spec, sigma_text.empty()));
            out << "wrote " << records.size() << " records to " << out_path
                << '\n';
            try {
                out << "xy sign change at "
                    << format_real(find_zero_crossing(records, spec.scenario))
                    << " mm\n";
            } catch (const NoSignChange &) {
                out << "xy keeps its sign over the sweep\n";
            }
            double worst = 0;
            bool any = false;
            for (const auto &r : records) {
                if (r.xy_discrepancy) {
                    worst = std::max(worst, *r.xy_discrepancy);
                    any = true;
                }
            }
            if (any) {
                out << "max |xy_grid - xy_analytic| = " << format_real(worst)
                    << " mm^2\n";
            }
            return kOk;
        }

        if (image->parsed()) {
            if (delta_opt->count() == 0 && alpha_opt->count() == 0) {
                throw UsageError("give exactly one of --delta and --alpha");
            }
            Scenario scenario{parse_scenario_kind(image_scenario), sigma_mm};
            const GridSpec grid = for_flag(
                "--pixel", [&] { return make_grid(grid_size, pixel_text); });
            const double delta_mm =
                delta_opt->count() == 0
                    ? 0.0
                    : for_flag("--delta",
                               [&] { return parse_length_mm(delta_text); });
            const IntensityImage img =
                delta_opt->count() != 0
                    ? simulate_image(scenario, grid, delta_mm)
                    : simulate_image_slm(scenario, grid, alpha);
            write_file(out_path, render_pgm(img));
            if (!raw_path.empty()) {
                write_file(raw_path, render_raw_grid(img));
            }
            const auto m = discrete_means(img);
            out << "<x> = " << format_real(m.x_mean) << " mm  <y> = "
                << format_real(m.y_mean) << " mm  <xy> = "
                << format_real(m.xy_mean) << " mm^2\n";
            return kOk;
        }

        if (verify->parsed()) {
            VerifyOptions opts;
            opts.fast = fast;
            opts.slm_mm_per_unit = slm_k;
            const auto results = run_verification(opts);
            const CheckResult *first_failure = nullptr;
            for (const auto &r : results) {
                out << (r.passed ? "PASS  " : "FAIL  ") << std::left
                    << std::setw(40) << r.name << r.detail << '\n';
                if (!r.passed && first_failure == nullptr) {
                    first_failure = &r;
                }
            }
            if (first_failure != nullptr) {
                err << "verification failed: " << first_failure->name << '\n';
                return kVerificationFailed;
            }
            return kOk;
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CLI::Error &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const OrthogonalPostselection &e) {
        err << "error: " << e.what() << '\n';
        return kUndefinedWeakValue;
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kEngineFailure;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kEngineFailure;
    }
    return kUsage;
}

} // namespace wmsim::cli
