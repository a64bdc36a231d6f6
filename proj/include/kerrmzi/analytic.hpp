#pragma once
// Closed-form results for the Kerr-MZI with correlated (NBS2) readout.
//
// Every sensitivity formula here is evaluated at the operating point phi = 0
// (linear phase absorbed, nonlinear phase zero). The observable is the phase
// quadrature Y = -i(a3 - a3^dagger) of the NBS2 output, vacuum variance 1.

#include <complex>
#include <optional>

#include "kerrmzi/model.hpp"

namespace kerrmzi::analytic {

using complex = std::complex<double>;

/// Input-output coefficients with the Kerr operator phase replaced by its value
/// on Fock level n: psi = phi_l + phi_n (2n + 1).
///
///   b2 = m1 b1 + m0 c0,            c2 = m2 c0 + m0 b1
///   a3 = a a0 + b b0^+ + c c0^+,   b3 = d a0^+ + e b0 + f c0
///   c2 = m2 c0 + h b0 + i a0^+
struct TransferCoefficients {
  complex m0, m1, m2;
  complex a, b, c;
  complex d, e, f, h, i;
};

TransferCoefficients transfer_coefficients(const SplitterParams& splitter, const SqueezerParams& nbs1,
                                           const SqueezerParams& nbs2, const PhaseShift& phase, int n);

/// |d<Y>/d phi_n| at phi = 0, lossless.
double slope_at_zero(const InterferometerConfig& config);

/// <Delta^2 Y> at phi = 0, lossless. Independent of T, alpha and phi.
double noise_at_zero(const InterferometerConfig& config);

/// Slope when only a linear phase is sensed; maximal at T = R.
double linear_only_slope(const InterferometerConfig& config);

/// Balanced configuration: G1 = G2, theta_alpha = 0, theta_1 = 0, theta_2 = pi.
bool is_balanced(const InterferometerConfig& config);

struct BalancedTerms {
  double linear = 0.0;           ///< 2 sqrt(TR) N_a^{1/2}
  double nonlinear = 0.0;        ///< 4 R sqrt(TR) N_a^{3/2}
  double nonlinear_corr = 0.0;   ///< 4 T sqrt(TR) N_a^{1/2} N_g
};

/// Terms of the balanced sensitivity 1 / (g (T_lin + T_nonlin + T_corr)).
BalancedTerms balanced_terms(const InterferometerConfig& config);

struct SensitivityReport {
  double slope = 0.0;
  double noise = 0.0;
  double delta_phi = 0.0;
  double n_ps = 0.0;
  double sql = 0.0;
  double qfi = 0.0;
  double qcrb = 0.0;
  std::optional<BalancedTerms> terms;

  bool beats_sql() const noexcept { return delta_phi < sql; }
};

/// Error-propagation sensitivity at phi = 0 with SQL and QCRB.
///
/// Lossless configs use the lossless slope/noise directly. Otherwise the
/// internal/external loss formulas are used and detection loss is applied on
/// top (slope * sqrt(eta), noise * eta + 1 - eta). QCRB is the pure-state
/// bound of the lossless probe. Throws UndefinedSensitivity on zero slope.
SensitivityReport sensitivity(const InterferometerConfig& config, int repeats = 1);

/// 1 / N_ps^{3/2}
double sql_nonlinear(double n_ps);

/// Closed-form optimal R/T for the nonlinear slope.
double optimal_split_ratio(double n_alpha, double g1);

/// Numeric argmax over T of the T-dependent slope factor (Brent / golden-section
/// search), returned as R/T. Cross-check for optimal_split_ratio.
double numeric_optimal_split_ratio(double n_alpha, double g1);

/// T = 1 / (1 + R/T)
double transmissivity_from_ratio(double r_over_t);

struct QfiBreakdown {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  double f = 0.0;
};

/// F = 4[<n^4> - <n^2>^2] of the Kerr arm, as a cubic in N_alpha. n_g = 2 g1^2.
QfiBreakdown qfi_nonlinear(double n_alpha, double n_g, const SplitterParams& splitter);

/// F = 4 <Delta^2 n> for a purely linear phase.
double qfi_linear(double n_alpha, double n_g, const SplitterParams& splitter);

/// Same quantity as qfi_linear, computed from the displaced-thermal moments of
/// the Kerr arm (displacement^2 = R N_alpha, thermal occupancy T N_g / 2).
double qfi_linear_from_moments(double n_alpha, double n_g, const SplitterParams& splitter);

/// 1 / sqrt(m F)
double qcrb(double f, int m = 1);

double lossy_slope_at_zero(const InterferometerConfig& config);
double lossy_noise_at_zero(const InterferometerConfig& config);

/// Sensitivity with detection efficiency eta_det applied to the NBS2 output.
/// Throws DomainError when eta_det = 0, UndefinedSensitivity on zero slope.
double detection_loss_sensitivity(const InterferometerConfig& config);

/// d phi_n / d chi3 = 3 <I> k L / (4 n0^2 eps0 c)
double chi3_phase_coefficient(const KerrMediumSpec& medium);

double chi3_phase(const KerrMediumSpec& medium, double chi3);

/// Delta chi3 = Delta phi_n / chi3_phase_coefficient
double chi3_uncertainty(const KerrMediumSpec& medium, double delta_phi_n);

}  // namespace kerrmzi::analytic
