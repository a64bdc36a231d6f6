#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "kerrmzi/config_io.hpp"
#include "support.hpp"

using namespace kerrmzi;

namespace {

const char* kFigure = R"(nbs1: { g: 2, phase: 0 }
nbs2: { g: 4, phase: pi }
splitter: { r_over_t: 3 }
coherent: { magnitude: 10, phase: 0 }
)";

ConfigError parse_error(const std::string& text) {
  try {
    io::parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", 0, "");
}

}  // namespace

TEST_CASE("figure config parses") {
  const auto c = io::parse_config(kFigure);
  CHECK(c.nbs1.g() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.nbs2.phase == std::numbers::pi);
  CHECK(c.splitter.transmissivity == 0.25);
  CHECK(c.coherent.magnitude == 10.0);
  CHECK(c.loss.lossless());
}

TEST_CASE("pi expressions") {
  const auto c = io::parse_config(R"(nbs1: { gain: 1.5, phase: pi/2 }
nbs2: { gain: 1.5, phase: -0.5*pi }
splitter: { transmissivity: 0.5 }
coherent: { magnitude: 1, phase: 2pi }
)");
  CHECK(c.nbs1.phase == doctest::Approx(std::numbers::pi / 2));
  CHECK(c.nbs2.phase == doctest::Approx(-std::numbers::pi / 2));
  CHECK(c.coherent.phase == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("unknown key names key and line") {
  const auto e = parse_error(R"(nbs1: { g: 2, phase: 0 }
nbs2: { g: 4, phase: pi }
splitter:
  transmissivity: 0.25
  reflectivity: 0.75
coherent: { magnitude: 10, phase: 0 }
)");
  CHECK(e.key() == "splitter.reflectivity");
  CHECK(e.line() == 5);
}

TEST_CASE("out-of-range value names field and line") {
  const auto e = parse_error(R"(nbs1: { g: 2, phase: 0 }
nbs2: { g: 4, phase: pi }
splitter: { transmissivity: 0.25 }
coherent: { magnitude: 10, phase: 0 }
loss:
  eta_a: 1
  eta_c: 1.3
)");
  CHECK(e.key() == "loss.eta_c");
  CHECK(e.line() == 7);
  CHECK(std::string(e.what()).find("line 7") != std::string::npos);
}

TEST_CASE("malformed number and missing section") {
  auto e = parse_error(R"(nbs1: { g: two, phase: 0 }
nbs2: { g: 4, phase: pi }
splitter: { transmissivity: 0.25 }
coherent: { magnitude: 10, phase: 0 }
)");
  CHECK(e.key() == "nbs1.g");
  CHECK(e.line() == 1);

  e = parse_error("nbs1: { g: 2, phase: 0 }\n");
  CHECK(e.key().find("nbs2") != std::string::npos);

  e = parse_error("nbs1: [1, 2\n");
  CHECK(e.line() >= 1);
}

TEST_CASE("gain and g are exclusive") {
  const auto e = parse_error(R"(nbs1: { g: 2, gain: 3, phase: 0 }
nbs2: { g: 4, phase: pi }
splitter: { transmissivity: 0.25 }
coherent: { magnitude: 10, phase: 0 }
)");
  CHECK(e.key().rfind("nbs1.", 0) == 0);
}

TEST_CASE("property: format_config round trips") {
  kt::Gen gen(21);
  for (int k = 0; k < 300; ++k) {
    const auto c = gen.lossy_config();
    REQUIRE(io::parse_config(io::format_config(c)) == c);
  }
}

TEST_CASE("medium section") {
  const auto m = io::parse_medium("medium: { n0: 1.5, intensity: 1e9, wavenumber: 7.4e6, length: 0.01 }\n");
  CHECK(m.n0 == 1.5);
  CHECK(m.epsilon0 == doctest::Approx(8.8541878128e-12));
  try {
    io::parse_medium("medium:\n  n0: 1.5\n  intensity: 1e9\n  length: -2\n  wavenumber: 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "medium.length");
    CHECK(e.line() == 4);
  }
}

TEST_CASE("sweep spec with inline base and file base") {
  const auto dir = std::filesystem::temp_directory_path() / "kerrmzi_cfg_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "base.yaml") << kFigure;

  const auto spec = io::parse_sweep_spec(R"(base_file: base.yaml
axes:
  - { name: eta_c, min: 0.1, max: 1, points: 10 }
  - { name: eta_d, values: [0.5, 1.0] }
)",
                                         dir.string());
  CHECK(spec.base == io::parse_config(kFigure));
  REQUIRE(spec.axes.size() == 2);
  CHECK(spec.axes[0].values.size() == 10);
  CHECK(spec.axes[0].values.front() == 0.1);
  CHECK(spec.axes[0].values.back() == 1.0);
  CHECK(spec.axes[1].values == std::vector<double>{0.5, 1.0});

  try {
    io::parse_sweep_spec(std::string("base:\n") + R"(  nbs1: { g: 2, phase: 0 }
  nbs2: { g: 4, phase: pi }
  splitter: { r_over_t: 3 }
  coherent: { magnitude: 10, phase: 0 }
axes:
  - { name: eta_q, min: 0, max: 1, points: 3 }
)");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 7);
    CHECK(std::string(e.what()).find("eta_q") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("single-point axis is rejected") {
  CHECK_THROWS_AS(io::parse_sweep_spec(std::string("base:\n") + R"(  nbs1: { g: 2, phase: 0 }
  nbs2: { g: 4, phase: pi }
  splitter: { r_over_t: 3 }
  coherent: { magnitude: 10, phase: 0 }
axes:
  - { name: eta_c, min: 0, max: 1, points: 1 }
)"),
                  ConfigError);
}
