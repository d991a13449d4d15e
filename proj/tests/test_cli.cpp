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
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "wmsim/cli.hpp"
#include "wmsim/experiments.hpp"
#include "wmsim/image_io.hpp"

using namespace wmsim;
using namespace wmsim::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string &name) {
    return (std::filesystem::path(WMSIM_TEST_TMPDIR) / name).string();
}

bool contains(const std::string &hay, std::string_view needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("length parsing needs a unit") {
    CHECK(parse_length_mm("0.1116mm") == doctest::Approx(0.1116));
    CHECK(parse_length_mm("13.5um") == doctest::Approx(0.0135));
    CHECK(parse_length_mm("2µm") == doctest::Approx(0.002));
    CHECK_THROWS_AS(parse_length_mm("0.2"), UsageError);
    CHECK_THROWS_AS(parse_length_mm("mm"), UsageError);
    CHECK_THROWS_AS(parse_length_mm("1.0cm"), UsageError);
}

TEST_CASE("complex, state and observable parsing") {
    CHECK(parse_complex("1.5") == std::complex<double>(1.5, 0));
    CHECK(parse_complex("2i") == std::complex<double>(0, 2));
    CHECK(parse_complex("1-0.5i") == std::complex<double>(1, -0.5));
    CHECK_THROWS_AS(parse_complex("x"), UsageError);

    CHECK(parse_state("a1").amp_h() == std::complex<double>(0.5));
    CHECK(parse_state("V").amp_v() == std::complex<double>(1));
    CHECK(std::abs(parse_state("0.6,0.8i").amp_v() -
                   std::complex<double>(0, 0.8)) < 1e-15);
    CHECK_THROWS_AS(parse_state("1,1"), UsageError);
    CHECK_THROWS_AS(parse_state("b7"), UsageError);

    CHECK(parse_observable("proj:H").matrix()(0, 0) == std::complex<double>(1));
    CHECK(parse_observable("1,0,0,-1").eigenvalues().first == -1);
    CHECK_THROWS_AS(parse_observable("1,1,0,1"), UsageError);
    CHECK_THROWS_AS(parse_observable("1,2,3"), UsageError);
}

TEST_CASE("delta range parsing") {
    const auto r = parse_delta_range("0:0.711:31");
    CHECK(r.start_mm == 0);
    CHECK(r.end_mm == doctest::Approx(0.711));
    CHECK(r.steps == 31);
    CHECK(parse_delta_range("0mm:500um:3").end_mm == doctest::Approx(0.5));
    CHECK_THROWS_AS(parse_delta_range("0:1"), UsageError);
    CHECK_THROWS_AS(parse_delta_range("0:1:x"), UsageError);
}

TEST_CASE("config file parsing") {
    const auto c = CliConfig::parse("# defaults\nsigma = 0.2mm\n\nengine=both # trailing\n");
    CHECK(c.values.at("sigma") == "0.2mm");
    CHECK(c.values.at("engine") == "both");
    CHECK_THROWS_AS(CliConfig::parse("no equals sign\n"), UsageError);
}

TEST_CASE("weak-value command") {
    auto r = invoke({"weak-value", "--pre", "a1", "--first", "proj:H",
                     "--second", "proj:a2"});
    CHECK(r.code == kOk);
    CHECK(contains(r.out, "-0.125"));
    CHECK(contains(r.out, "ANOMALOUS"));

    r = invoke({"weak-value", "--pre", "a1", "--post", "a1", "--a", "proj:H"});
    CHECK(r.code == kOk);
    CHECK(contains(r.out, "0.25"));
    CHECK(contains(r.out, "not anomalous"));

    r = invoke({"weak-value", "--pre", "H", "--post", "V", "--a", "proj:H"});
    CHECK(r.code == kUndefinedWeakValue);
}

TEST_CASE("usage errors name the flag") {
    auto r = invoke({"weak-value", "--pre", "zz", "--a", "proj:H"});
    CHECK(r.code == kUsage);
    CHECK(contains(r.err, "--pre"));

    r = invoke({"image", "--delta", "0.37", "--out", tmp("x.pgm")});
    CHECK(r.code == kUsage);
    CHECK(contains(r.err, "--delta"));

    r = invoke({"sweep", "--out", tmp("x.csv"), "--sigma", "7"});
    CHECK(r.code == kUsage);
    CHECK(contains(r.err, "--sigma"));

    CHECK(invoke({"bogus"}).code == kUsage);
    CHECK(invoke({"image", "--delta", "0.1mm", "--alpha", "3", "--out",
                  tmp("x.pgm")})
              .code == kUsage);
}

TEST_CASE("sweep command writes CSV and sidecar") {
    const std::string csv = tmp("cli_sweep.csv");
    auto r = invoke({"sweep", "--delta-range", "0:0.711:31", "--out", csv});
    REQUIRE(r.code == kOk);
    CHECK(contains(r.out, "0.33085"));
    const auto recs = parse_csv(read_file(csv));
    CHECK(recs.size() == 31);
    const std::string meta = read_file(csv + ".meta");
    CHECK(contains(meta, "sigma_source=derived"));

    const std::string first = read_file(csv);
    REQUIRE(invoke({"sweep", "--out", csv}).code == kOk);
    CHECK(read_file(csv) == first);
}

TEST_CASE("config overlay respects command-line precedence") {
    const std::string cfg = tmp("cli.cfg");
    write_file(cfg, "sigma = 0.2mm\nscenario = two-qubit\n");
    const std::string csv = tmp("cli_cfg.csv");
    auto r = invoke({"sweep", "--config", cfg, "--scenario", "sequential",
                     "--delta-range", "0:0.3:4", "--out", csv});
    REQUIRE(r.code == kOk);
    const std::string meta = read_file(csv + ".meta");
    CHECK(contains(meta, "scenario=sequential"));
    CHECK(contains(meta, "sigma_mm=0.2"));
    CHECK(contains(meta, "sigma_source=user supplied"));

    write_file(cfg, "colour = blue\n");
    CHECK(invoke({"sweep", "--config", cfg, "--out", csv}).code == kUsage);
    CHECK(invoke({"sweep", "--config", tmp("missing.cfg"), "--out", csv}).code !=
          kOk);
}

TEST_CASE("image command writes a PGM whose means match the engine") {
    const std::string pgm = tmp("cli_image.pgm");
    const std::string raw = tmp("cli_image.raw");
    auto r = invoke({"image", "--delta", "0.2mm", "--grid-size", "256", "--out",
                     pgm, "--raw", raw});
    REQUIRE(r.code == kOk);
    const auto p = parse_pgm(read_file(pgm));
    CHECK(p.width == 256);
    CHECK(p.maxval == 65535);
    const auto img = parse_raw_grid(read_file(raw));
    const auto m = discrete_means(img);
    const auto a = analytic_deflection(Scenario{}, 0.2);
    CHECK(m.xy_mean == doctest::Approx(a.xy_mean).epsilon(1e-8));

    // Means recovered from the quantized PGM samples.
    const GridSpec g = img.grid();
    RealPlane v(g.ny, g.nx);
    for (int i = 0; i < g.ny; ++i) {
        for (int j = 0; j < g.nx; ++j) {
            v(i, j) = p.samples[static_cast<std::size_t>(i * g.nx + j)];
        }
    }
    const auto q = discrete_means(IntensityImage(g, v));
    CHECK(std::abs(q.x_mean - a.x_mean) <= 1e-4);
    CHECK(std::abs(q.y_mean - a.y_mean) <= 1e-4);

    r = invoke({"image", "--alpha", "10", "--grid-size", "256", "--out", pgm});
    CHECK(r.code == kOk);
    r = invoke({"image", "--delta", "1mm", "--grid-size", "256", "--out", pgm});
    CHECK(r.code == kEngineFailure);
}

TEST_CASE("verify command") {
    auto r = invoke({"verify", "--fast"});
    CHECK(r.code == kOk);
    CHECK_FALSE(contains(r.out, "FAIL"));
    r = invoke({"verify", "--fast", "--override-slm-k", "0.0300"});
    CHECK(r.code == kVerificationFailed);
    CHECK(contains(r.out, "FAIL"));
}

} // TEST_SUITE
