#include "kerrmzi/analytic.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace kerrmzi::analytic {
namespace {

constexpr double kBalanceTol = 1e-12;

struct OperatingPoint {
  double slope;
  double noise;
};

// Slope and noise seen by the homodyne detector, all loss stages included.
OperatingPoint operating_point(const InterferometerConfig& config) {
  const LossParams& loss = config.loss;
  if (!(loss.eta_det > 0.0)) throw DomainError("detection efficiency eta_det must be > 0");
  OperatingPoint p = loss.internal_external_lossless()
                         ? OperatingPoint{slope_at_zero(config), noise_at_zero(config)}
                         : OperatingPoint{lossy_slope_at_zero(config), lossy_noise_at_zero(config)};
  if (loss.eta_det != 1.0) {
    p.slope *= std::sqrt(loss.eta_det);
    p.noise = loss.eta_det * p.noise + 1.0 - loss.eta_det;
  }
  return p;
}

}  // namespace

TransferCoefficients transfer_coefficients(const SplitterParams& splitter, const SqueezerParams& nbs1,
                                           const SqueezerParams& nbs2, const PhaseShift& phase, int n) {
  const double t = splitter.transmissivity;
  const double r = splitter.reflectivity();
  const complex kerr = std::polar(1.0, phase.linear + phase.nonlinear * (2.0 * n + 1.0));

  TransferCoefficients tc;
  tc.m0 = std::sqrt(t * r) * (kerr - 1.0);
  tc.m1 = r + t * kerr;
  tc.m2 = r * kerr + t;

  const double G1 = nbs1.gain, g1 = nbs1.g();
  const double G2 = nbs2.gain, g2 = nbs2.g();
  const complex e1 = std::polar(1.0, nbs1.phase);
  const complex e2 = std::polar(1.0, nbs2.phase);
  const complex e21 = std::polar(1.0, nbs2.phase - nbs1.phase);

  tc.a = G2 * G1 + g2 * g1 * e21 * std::conj(tc.m1);
  tc.b = G2 * g1 * e1 + G1 * g2 * e2 * std::conj(tc.m1);
  tc.c = g2 * e2 * std::conj(tc.m0);
  tc.d = G1 * g2 * e2 + G2 * g1 * e1 * tc.m1;
  tc.e = g2 * g1 * e21 + G2 * G1 * tc.m1;
  tc.f = G2 * tc.m0;
  tc.h = G1 * tc.m0;
  tc.i = g1 * e1 * tc.m0;
  return tc;
}

double slope_at_zero(const InterferometerConfig& config) {
  const double t = config.splitter.transmissivity;
  const double r = config.splitter.reflectivity();
  const double n_alpha = config.coherent.photon_number();
  const double g1 = config.nbs1.g();
  const double g2 = config.nbs2.g();
  return 2.0 * g2 * std::sqrt(t * r) * std::sqrt(n_alpha) * (1.0 + 2.0 * r * n_alpha + 4.0 * t * g1 * g1) *
         std::abs(std::cos(config.nbs2.phase - config.coherent.phase));
}

double noise_at_zero(const InterferometerConfig& config) {
  const double G1 = config.nbs1.gain, g1 = config.nbs1.g();
  const double G2 = config.nbs2.gain, g2 = config.nbs2.g();
  return G2 * G2 * G1 * G1 + g1 * g1 * g2 * g2 + G2 * G2 * g1 * g1 + G1 * G1 * g2 * g2 +
         4.0 * G2 * G1 * g1 * g2 * std::cos(config.nbs2.phase - config.nbs1.phase);
}

double linear_only_slope(const InterferometerConfig& config) {
  const double t = config.splitter.transmissivity;
  const double r = config.splitter.reflectivity();
  return 2.0 * config.nbs2.g() * std::sqrt(t * r) * config.coherent.magnitude *
         std::abs(std::cos(config.nbs2.phase - config.coherent.phase));
}

bool is_balanced(const InterferometerConfig& config) {
  const double G1 = config.nbs1.gain, G2 = config.nbs2.gain;
  return std::abs(G1 - G2) <= kBalanceTol * std::max(G1, G2) &&
         std::abs(std::cos(config.coherent.phase) - 1.0) <= kBalanceTol &&
         std::abs(std::cos(config.nbs1.phase) - 1.0) <= kBalanceTol &&
         std::abs(std::cos(config.nbs2.phase) + 1.0) <= kBalanceTol;
}

BalancedTerms balanced_terms(const InterferometerConfig& config) {
  const double t = config.splitter.transmissivity;
  const double r = config.splitter.reflectivity();
  const double n_alpha = config.coherent.photon_number();
  const double g = config.nbs1.g();
  const double n_g = 2.0 * g * g;
  const double sqrt_tr = std::sqrt(t * r);
  return {
      2.0 * sqrt_tr * std::sqrt(n_alpha),
      4.0 * r * sqrt_tr * std::pow(n_alpha, 1.5),
      4.0 * t * sqrt_tr * std::sqrt(n_alpha) * n_g,
  };
}

SensitivityReport sensitivity(const InterferometerConfig& config, int repeats) {
  validate(config);
  const OperatingPoint p = operating_point(config);
  if (!(p.slope > 0.0)) {
    throw UndefinedSensitivity("undefined sensitivity: slope at phi = 0 is zero");
  }

  SensitivityReport report;
  report.slope = p.slope;
  report.noise = p.noise;
  report.delta_phi = std::sqrt(p.noise) / p.slope;
  report.n_ps = phase_sensing_photons(config);
  report.sql = sql_nonlinear(report.n_ps);
  const double g1 = config.nbs1.g();
  report.qfi = qfi_nonlinear(config.coherent.photon_number(), 2.0 * g1 * g1, config.splitter).f;
  report.qcrb = qcrb(report.qfi, repeats);
  if (is_balanced(config)) report.terms = balanced_terms(config);
  return report;
}

double sql_nonlinear(double n_ps) {
  if (!(n_ps > 0.0)) throw DomainError("SQL needs N_ps > 0");
  return 1.0 / std::pow(n_ps, 1.5);
}

double optimal_split_ratio(double n_alpha, double g1) {
  if (!(n_alpha >= 0.0) || !(g1 >= 0.0)) throw DomainError("optimal_split_ratio needs n_alpha >= 0 and g1 >= 0");
  const double g2 = g1 * g1;
  const double disc = 9.0 * n_alpha * n_alpha - 28.0 * n_alpha * g2 + 2.0 * n_alpha + 36.0 * g2 * g2 + 4.0 * g2 + 1.0;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "optimal_split_ratio: negative discriminant " << disc << " for n_alpha=" << n_alpha << ", g1=" << g1;
    throw DomainError(os.str());
  }
  return (3.0 * n_alpha - 6.0 * g2 + std::sqrt(disc)) / (2.0 * n_alpha + 1.0);
}

double numeric_optimal_split_ratio(double n_alpha, double g1) {
  if (!(n_alpha >= 0.0) || !(g1 >= 0.0)) throw DomainError("numeric_optimal_split_ratio needs n_alpha >= 0, g1 >= 0");
  // slope_at_zero = 2 g2 sqrt(N_a) |cos| * profile(T); the prefactor does not move the argmax.
  const auto neg_profile = [&](double t) {
    const double r = 1.0 - t;
    return -std::sqrt(t * r) * (1.0 + 2.0 * r * n_alpha + 4.0 * t * g1 * g1);
  };
  // Brent cannot resolve the argmax below sqrt(machine epsilon).
  constexpr int kBits = std::numeric_limits<double>::digits / 2;
  boost::uintmax_t max_iter = 500;
  const auto [t_best, _] = boost::math::tools::brent_find_minima(neg_profile, 0.0, 1.0, kBits, max_iter);
  return (1.0 - t_best) / t_best;
}

double transmissivity_from_ratio(double r_over_t) { return 1.0 / (1.0 + r_over_t); }

QfiBreakdown qfi_nonlinear(double n_alpha, double n_g, const SplitterParams& splitter) {
  const double T = splitter.transmissivity;
  const double R = splitter.reflectivity();
  const double R2 = R * R, R3 = R2 * R, R4 = R3 * R;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T;
  const double N = n_g, N2 = N * N, N3 = N2 * N, N4 = N3 * N;

  QfiBreakdown q;
  q.s1 = 16.0 * R4 + 16.0 * R3 * T * (N + 1.0);
  q.s2 = 24.0 * R4 + R3 * T * (88.0 * N + 48.0) + R2 * T2 * (52.0 * N2 + 88.0 * N + 24.0);
  q.s3 = 4.0 * R4 + R3 * T * (52.0 * N + 12.0) + R2 * T2 * (96.0 * N2 + 104.0 * N + 12.0) +
         R * T3 * (40.0 * N3 + 96.0 * N2 + 52.0 * N + 4.0);
  q.s4 = T4 * (5.0 * N4 + 16.0 * N3 + 13.0 * N2 + 2.0 * N) + T3 * R * (16.0 * N3 + 26.0 * N2 + 6.0 * N) +
         T2 * R2 * (13.0 * N2 + 6.0 * N) + 2.0 * T * R3 * N;
  const double na = n_alpha;
  q.f = na * na * na * q.s1 + na * na * q.s2 + na * q.s3 + q.s4;
  return q;
}

double qfi_linear(double n_alpha, double n_g, const SplitterParams& splitter) {
  const double T = splitter.transmissivity;
  const double R = splitter.reflectivity();
  return n_alpha * (4.0 * R * R + 4.0 * R * T * (n_g + 1.0)) + n_g * (T * T * n_g + 2.0 * T * R) +
         2.0 * T * T * n_g;
}

double qfi_linear_from_moments(double n_alpha, double n_g, const SplitterParams& splitter) {
  const double displacement2 = splitter.reflectivity() * n_alpha;
  const double thermal = splitter.transmissivity * n_g / 2.0;
  // Var(n) of a displaced thermal state.
  const double var_n = displacement2 * (2.0 * thermal + 1.0) + thermal * thermal + thermal;
  return 4.0 * var_n;
}

double qcrb(double f, int m) {
  if (!(f > 0.0)) throw DomainError("QCRB needs Fisher information > 0");
  if (m < 1) throw DomainError("QCRB needs at least one repetition");
  return 1.0 / std::sqrt(static_cast<double>(m) * f);
}

double lossy_slope_at_zero(const InterferometerConfig& config) {
  const LossParams& l = config.loss;
  const double t = config.splitter.transmissivity;
  const double r = config.splitter.reflectivity();
  const double n_alpha = config.coherent.photon_number();
  const double g1 = config.nbs1.g();
  const double n_g = 2.0 * g1 * g1;
  const double g2 = config.nbs2.g();
  return 2.0 * g2 * std::sqrt(l.eta_b * l.eta_d * t * r) * std::sqrt(n_alpha) *
         (1.0 + 2.0 * r * n_alpha + 2.0 * t * n_g) * std::abs(std::cos(config.nbs2.phase - config.coherent.phase));
}

double lossy_noise_at_zero(const InterferometerConfig& config) {
  const LossParams& l = config.loss;
  const double T = config.splitter.transmissivity;
  const double R = config.splitter.reflectivity();
  const double G1 = config.nbs1.gain, g1 = config.nbs1.g();
  const double G2 = config.nbs2.gain, g2 = config.nbs2.g();
  const double mix = std::sqrt(l.eta_d) * T + std::sqrt(l.eta_c) * R;
  const double arm_diff = std::sqrt(l.eta_d) - std::sqrt(l.eta_c);

  // Products ordered like noise_at_zero so that eta = 1 reproduces it bit for bit.
  return l.eta_a * G2 * G2 * G1 * G1 + l.eta_b * g1 * g1 * g2 * g2 * mix * mix + l.eta_a * G2 * G2 * g1 * g1 +
         l.eta_b * G1 * G1 * g2 * g2 * mix * mix + l.eta_b * g2 * g2 * T * R * arm_diff * arm_diff +
         (1.0 - l.eta_a) * G2 * G2 + (1.0 - l.eta_b) * g2 * g2 + l.eta_b * (1.0 - l.eta_c) * g2 * g2 * R +
         l.eta_b * (1.0 - l.eta_d) * g2 * g2 * T +
         4.0 * std::sqrt(l.eta_a * l.eta_b) * G2 * G1 * g1 * g2 * mix * std::cos(config.nbs2.phase - config.nbs1.phase);
}

double detection_loss_sensitivity(const InterferometerConfig& config) {
  const OperatingPoint p = operating_point(config);
  if (!(p.slope > 0.0)) throw UndefinedSensitivity("undefined sensitivity: slope at phi = 0 is zero");
  return std::sqrt(p.noise) / p.slope;
}

double chi3_phase_coefficient(const KerrMediumSpec& m) {
  validate(m);
  return 3.0 * m.intensity * m.wavenumber * m.length / (4.0 * m.n0 * m.n0 * m.epsilon0 * m.c);
}

double chi3_phase(const KerrMediumSpec& medium, double chi3) { return chi3_phase_coefficient(medium) * chi3; }

double chi3_uncertainty(const KerrMediumSpec& m, double delta_phi_n) {
  validate(m);
  if (!(delta_phi_n >= 0.0)) throw DomainError("delta_phi_n must be >= 0");
  return 4.0 * m.n0 * m.n0 * m.epsilon0 * m.c / (3.0 * m.intensity * m.wavenumber * m.length) * delta_phi_n;
}

}  // namespace kerrmzi::analytic
