#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kerrmzi/analytic.hpp"
#include "support.hpp"

using namespace kerrmzi;
using namespace kerrmzi::analytic;
using std::numbers::pi;

namespace {

InterferometerConfig balanced_config(double g, double alpha, double t) {
  InterferometerConfig c;
  c.nbs1 = SqueezerParams::from_g(g, 0.0);
  c.nbs2 = SqueezerParams::from_g(g, pi);
  c.splitter.transmissivity = t;
  c.coherent = {alpha, 0.0};
  return c;
}

// Golden-section argmax on [0, 1]; independent of the Brent search in the library.
template <class F>
double golden_argmax(F f, double lo = 0.0, double hi = 1.0) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace

TEST_CASE("zero phase makes the MZI the identity") {
  for (int n : {0, 1, 7}) {
    const auto tc = transfer_coefficients(SplitterParams{0.3}, {}, {}, {}, n);
    CHECK(std::abs(tc.m1 - 1.0) < 1e-15);
    CHECK(std::abs(tc.m0) < 1e-15);
    CHECK(std::abs(tc.m2 - 1.0) < 1e-15);
  }
}

TEST_CASE("unitarity and commutator at the documented points") {
  auto tc = transfer_coefficients(SplitterParams{0.25}, {}, {}, PhaseShift{0.0, 0.1}, 1);
  CHECK(std::norm(tc.m1) + std::norm(tc.m0) == doctest::Approx(1.0).epsilon(1e-12));
  const auto c = kt::figure_config();
  tc = transfer_coefficients(c.splitter, c.nbs1, c.nbs2, PhaseShift{0.0, 0.05}, 3);
  CHECK(std::abs(std::norm(tc.a) - std::norm(tc.b) - std::norm(tc.c) - 1.0) < 1e-12);
}

TEST_CASE("slope at the figure point") {
  const auto c = kt::figure_config();
  const double expected = 2.0 * 4.0 * std::sqrt(0.1875) * 10.0 * 155.0;
  CHECK(slope_at_zero(c) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(slope_at_zero(c) == doctest::Approx(5369.357).epsilon(1e-6));

  auto z = c;
  z.nbs2 = SqueezerParams{};
  CHECK(slope_at_zero(z) == 0.0);
  z = c;
  z.coherent.magnitude = 0.0;
  CHECK(slope_at_zero(z) == 0.0);
}

TEST_CASE("noise at the figure point") {
  const auto c = kt::figure_config();
  CHECK(noise_at_zero(c) == doctest::Approx(297.0 - 32.0 * std::sqrt(85.0)).epsilon(1e-12));
  CHECK(noise_at_zero(c) == doctest::Approx(1.97458).epsilon(1e-5));
  CHECK(noise_at_zero(InterferometerConfig{}) == 1.0);
  CHECK(noise_at_zero(balanced_config(3.0, 1.0, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sensitivity report at the figure point") {
  const auto r = sensitivity(kt::figure_config());
  CHECK(r.delta_phi == doctest::Approx(std::sqrt(297.0 - 32.0 * std::sqrt(85.0)) / 5369.3577).epsilon(1e-6));
  CHECK(r.delta_phi == doctest::Approx(2.617e-4).epsilon(1e-3));
  CHECK(r.n_ps == doctest::Approx(108.0));
  CHECK(r.sql == doctest::Approx(8.9098e-4).epsilon(1e-4));
  CHECK(r.beats_sql());
  CHECK(r.delta_phi >= r.qcrb);
  CHECK_FALSE(r.terms.has_value());
}

TEST_CASE("balanced terms and sensitivity") {
  const auto c = balanced_config(2.0, 10.0, 0.25);
  REQUIRE(is_balanced(c));
  const auto r = sensitivity(c);
  REQUIRE(r.terms.has_value());
  CHECK(r.terms->linear == doctest::Approx(8.6603).epsilon(1e-4));
  CHECK(r.terms->nonlinear == doctest::Approx(1299.04).epsilon(1e-5));
  CHECK(r.terms->nonlinear_corr == doctest::Approx(34.641).epsilon(1e-4));
  const double from_terms = 1.0 / (2.0 * (r.terms->linear + r.terms->nonlinear + r.terms->nonlinear_corr));
  CHECK(r.delta_phi == doctest::Approx(from_terms).epsilon(1e-12));
  CHECK(r.delta_phi == doctest::Approx(3.7248e-4).epsilon(1e-4));
}

TEST_CASE("zero slope is an explicit error") {
  auto c = kt::figure_config();
  c.nbs2 = SqueezerParams{};
  CHECK_THROWS_AS(sensitivity(c), UndefinedSensitivity);
  c = kt::figure_config();
  c.coherent.magnitude = 0.0;
  CHECK_THROWS_WITH_AS(sensitivity(c), doctest::Contains("undefined sensitivity"), UndefinedSensitivity);
}

TEST_CASE("SQL") {
  CHECK(sql_nonlinear(1.0) == 1.0);
  CHECK(sql_nonlinear(4.0) == 0.125);
  CHECK(sql_nonlinear(108.0) == doctest::Approx(1.0 / (108.0 * std::sqrt(108.0))).epsilon(1e-14));
  CHECK_THROWS_AS(sql_nonlinear(0.0), DomainError);
  CHECK_THROWS_AS(sql_nonlinear(-1.0), DomainError);
}

TEST_CASE("optimal split ratio") {
  CHECK(optimal_split_ratio(1e6, 2.0) == doctest::Approx(3.0).epsilon(1e-2 / 3.0));
  const double r100 = optimal_split_ratio(100.0, 2.0);
  CHECK(r100 == doctest::Approx(2.777).epsilon(1e-3));
  const auto profile = [](double na, double g1) {
    return [=](double t) { return std::sqrt(t * (1 - t)) * (1.0 + 2.0 * (1 - t) * na + 4.0 * t * g1 * g1); };
  };
  CHECK(transmissivity_from_ratio(r100) == doctest::Approx(golden_argmax(profile(100.0, 2.0))).epsilon(1e-6));
  CHECK(optimal_split_ratio(0.0, 0.0) == 1.0);
  CHECK(golden_argmax(profile(0.0, 0.0)) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK_THROWS_AS(optimal_split_ratio(-1.0, 0.0), DomainError);
}

TEST_CASE("property: closed-form split ratio is the numeric argmax") {
  kt::Gen gen(31);
  for (int k = 0; k < 200; ++k) {
    const double na = gen.uniform(0.0, 1e4), g1 = gen.uniform(0.0, 5.0);
    const double t_closed = transmissivity_from_ratio(optimal_split_ratio(na, g1));
    const double t_brent = transmissivity_from_ratio(numeric_optimal_split_ratio(na, g1));
    CHECK_MESSAGE(std::abs(t_closed - t_brent) < 1e-4, "N_alpha=" << na << " g1=" << g1);
  }
}

TEST_CASE("linear-only slope peaks at T = 1/2") {
  InterferometerConfig c = kt::figure_config();
  c.splitter.transmissivity = 0.5;
  c.nbs2.phase = 0.0;
  CHECK(linear_only_slope(c) == doctest::Approx(2.0 * 4.0 * 0.5 * 10.0));
  const double t_best = golden_argmax([&](double t) {
    auto x = c;
    x.splitter.transmissivity = t;
    return linear_only_slope(x);
  });
  CHECK(std::abs(t_best - 0.5) < 1e-6);
  c.coherent.magnitude = 0.0;
  CHECK(linear_only_slope(c) == 0.0);
}

TEST_CASE("QFI polynomial coefficients") {
  const auto q = qfi_nonlinear(0.0, 8.0, SplitterParams{0.25});
  CHECK(q.s1 == doctest::Approx(20.25).epsilon(1e-14));
  CHECK(q.s2 == doctest::Approx(229.5).epsilon(1e-14));
  CHECK(qfi_nonlinear(0.0, 0.0, SplitterParams{0.4}).f == 0.0);
}

TEST_CASE("linear QFI special cases") {
  CHECK(qfi_linear(0.0, 8.0, SplitterParams{0.5}) == doctest::Approx(24.0).epsilon(1e-15));
  for (double ng : {0.5, 2.0, 8.0}) {
    CHECK(std::abs(qfi_linear(0.0, ng, SplitterParams{0.5}) - 0.25 * (ng * (ng + 2.0) + 2.0 * ng)) < 1e-12);
  }
  CHECK(qfi_linear(0.0, 0.0, SplitterParams{0.3}) == 0.0);
  CHECK(qfi_linear(3.0, 5.0, SplitterParams{1.0}) == doctest::Approx(5.0 * 5.0 + 2.0 * 5.0));
}

TEST_CASE("property: QFI identities") {
  kt::Gen gen(32);
  for (int k = 0; k < 2000; ++k) {
    const double na = gen.uniform(0.0, 100.0), ng = gen.uniform(0.0, 20.0);
    const SplitterParams s{gen.uniform(0.0, 1.0)};
    const auto q = qfi_nonlinear(na, ng, s);
    const double horner = ((q.s1 * na + q.s2) * na + q.s3) * na + q.s4;
    REQUIRE(std::abs(q.f - horner) <= 1e-10 * std::abs(horner) + 1e-300);
    REQUIRE(q.f >= 0.0);
    const double lin = qfi_linear(na, ng, s);
    REQUIRE(std::abs(lin - qfi_linear_from_moments(na, ng, s)) <= 1e-12 * std::max(1.0, lin));
  }
}

TEST_CASE("QCRB") {
  CHECK(qcrb(24.0) == doctest::Approx(0.2041).epsilon(1e-4));
  CHECK(qcrb(1.0) == 1.0);
  CHECK(qcrb(1.0, 100) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(qcrb(0.0), DomainError);
}

TEST_CASE("lossy slope") {
  auto c = kt::figure_config();
  const double lossless = slope_at_zero(c);
  c.loss.eta_d = 0.5;
  CHECK(lossy_slope_at_zero(c) == doctest::Approx(lossless * std::sqrt(0.5)).epsilon(1e-14));
  c.loss.eta_d = 0.0;
  CHECK(lossy_slope_at_zero(c) == 0.0);
}

TEST_CASE("lossy noise") {
  auto c = balanced_config(1.5, 1.0, 0.3);
  CHECK(lossy_noise_at_zero(c) == doctest::Approx(1.0).epsilon(1e-12));

  c = InterferometerConfig{};
  c.nbs1 = SqueezerParams::from_g(1.2);
  c.loss.eta_a = 0.0;
  CHECK(lossy_noise_at_zero(c) == doctest::Approx(1.0).epsilon(1e-15));

  // All nine terms written out by hand at eta_d = 0.7.
  c = kt::figure_config();
  c.loss.eta_d = 0.7;
  const double G1 = std::sqrt(5.0), g1 = 2.0, G2 = std::sqrt(17.0), g2 = 4.0, T = 0.25, R = 0.75;
  const double mix = std::sqrt(0.7) * T + R;
  const double expected = G2 * G2 * G1 * G1 + g2 * g2 * g1 * g1 * mix * mix + G2 * G2 * g1 * g1 +
                          g2 * g2 * G1 * G1 * mix * mix +
                          g2 * g2 * T * R * (std::sqrt(0.7) - 1.0) * (std::sqrt(0.7) - 1.0) +
                          0.3 * g2 * g2 * T - 4.0 * G2 * G1 * g1 * g2 * mix;
  CHECK(lossy_noise_at_zero(c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("property: lossy formulas reduce to the lossless ones at unit efficiency") {
  kt::Gen gen(33);
  for (int k = 0; k < 5000; ++k) {
    const auto c = gen.config();
    const double s = slope_at_zero(c);
    REQUIRE(std::abs(lossy_slope_at_zero(c) - s) <= 1e-14 * s);
    REQUIRE(std::abs(lossy_noise_at_zero(c) - noise_at_zero(c)) <= 1e-14 * noise_at_zero(c));
    REQUIRE(4.0 * c.splitter.transmissivity * c.nbs1.g() * c.nbs1.g() ==
            doctest::Approx(2.0 * c.splitter.transmissivity * (2.0 * c.nbs1.g() * c.nbs1.g())).epsilon(1e-14));
  }
}

TEST_CASE("property: sensitivity never beats the QCRB") {
  kt::Gen gen(34);
  int evaluated = 0;
  for (int k = 0; k < 5000; ++k) {
    const auto c = k % 2 ? gen.lossy_config() : gen.config();
    try {
      const auto r = sensitivity(c);
      REQUIRE(r.delta_phi >= r.qcrb);
      REQUIRE(r.delta_phi == doctest::Approx(std::sqrt(r.noise) / r.slope).epsilon(1e-15));
      ++evaluated;
    } catch (const UndefinedSensitivity&) {
    }
  }
  CHECK(evaluated > 4900);
}

TEST_CASE("property: balanced decomposition equals the slope") {
  kt::Gen gen(35);
  for (int k = 0; k < 2000; ++k) {
    const auto c = balanced_config(gen.uniform(0.01, 5.0), gen.uniform(0.1, 10.0), gen.uniform(0.01, 0.99));
    const auto t = balanced_terms(c);
    const double s = c.nbs2.g() * (t.linear + t.nonlinear + t.nonlinear_corr);
    REQUIRE(std::abs(s - slope_at_zero(c)) <= 1e-12 * s);
  }
}

TEST_CASE("detection loss") {
  const auto c = balanced_config(2.0, 10.0, 0.25);
  const double base = sensitivity(c).delta_phi;
  auto d = c;
  d.loss.eta_det = 0.64;
  CHECK(detection_loss_sensitivity(d) == doctest::Approx(base * 1.25).epsilon(1e-12));
  for (int e = 1; e <= 10; ++e) {
    d.loss.eta_det = 0.1 * e;
    CHECK(std::abs(detection_loss_sensitivity(d) * std::sqrt(d.loss.eta_det) / base - 1.0) < 1e-12);
  }
  d.loss.eta_det = 1.0;
  CHECK(detection_loss_sensitivity(d) == base);
  d.loss.eta_det = 0.0;
  CHECK_THROWS_AS(detection_loss_sensitivity(d), DomainError);
}

TEST_CASE("chi3 conversion") {
  const KerrMediumSpec m{1.5, 1e9, 7.4e6, 0.01};
  CHECK(chi3_phase(m, 0.0) == 0.0);
  CHECK(chi3_uncertainty(m, 0.0) == 0.0);
  auto longer = m;
  longer.length *= 2.0;
  CHECK(chi3_phase(longer, 1e-20) == doctest::Approx(2.0 * chi3_phase(m, 1e-20)).epsilon(1e-15));
  CHECK(chi3_uncertainty(longer, 1e-3) == doctest::Approx(0.5 * chi3_uncertainty(m, 1e-3)).epsilon(1e-15));
  CHECK(chi3_uncertainty(m, 2e-3) == doctest::Approx(2.0 * chi3_uncertainty(m, 1e-3)).epsilon(1e-15));
  for (double chi3 : {1e-22, 3.3e-20, 7e-18}) {
    CHECK(std::abs(chi3_uncertainty(m, chi3_phase(m, chi3)) / chi3 - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(chi3_uncertainty(m, -1.0), DomainError);
  auto bad = m;
  bad.n0 = 0.0;
  CHECK_THROWS_AS(chi3_phase(bad, 1.0), ValidationError);
}
