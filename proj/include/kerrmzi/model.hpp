#pragma once
// Parameters of a Mach-Zehnder interferometer seeded by a coherent state and one
// arm of a two-mode squeezed vacuum, with a Kerr phase shifter in one arm and a
// second two-mode squeezer for correlated readout.
//
// Conventions: all angles in radians, never wrapped. Squeezers are described by
// their amplitude gain G (G^2 - g^2 = 1). Splitter reflectivity is always 1 - T.

#include <cmath>
#include <string>
#include <vector>

#include "kerrmzi/errors.hpp"

namespace kerrmzi {

struct CoherentInput {
  double magnitude = 0.0;  ///< |alpha|
  double phase = 0.0;      ///< theta_alpha

  double photon_number() const noexcept { return magnitude * magnitude; }

  bool operator==(const CoherentInput&) const = default;
};

struct SqueezerParams {
  double gain = 1.0;   ///< G >= 1
  double phase = 0.0;  ///< theta

  /// Builds from the conjugate amplitude g = sqrt(G^2 - 1).
  static SqueezerParams from_g(double g, double phase = 0.0) {
    return {std::sqrt(1.0 + g * g), phase};
  }

  /// g = sqrt((G - 1)(G + 1)); factored form keeps precision near G = 1.
  double g() const noexcept { return std::sqrt((gain - 1.0) * (gain + 1.0)); }

  /// Squeezing parameter r with G = cosh r.
  double squeezing() const noexcept { return std::acosh(gain); }

  bool operator==(const SqueezerParams&) const = default;
};

struct SplitterParams {
  double transmissivity = 0.5;

  static SplitterParams from_ratio(double r_over_t) { return {1.0 / (1.0 + r_over_t)}; }

  double reflectivity() const noexcept { return 1.0 - transmissivity; }
  double ratio() const noexcept { return reflectivity() / transmissivity; }

  bool operator==(const SplitterParams&) const = default;
};

struct PhaseShift {
  double linear = 0.0;
  double nonlinear = 0.0;

  bool operator==(const PhaseShift&) const = default;
};

struct LossParams {
  double eta_a = 1.0;  ///< outside arm a (TMSV partner, before NBS2)
  double eta_b = 1.0;  ///< outside arm b (MZI output, before NBS2)
  double eta_c = 1.0;  ///< inside MZI, reference arm
  double eta_d = 1.0;  ///< inside MZI, Kerr arm (after the phase shifter)
  double eta_det = 1.0;

  bool internal_external_lossless() const noexcept {
    return eta_a == 1.0 && eta_b == 1.0 && eta_c == 1.0 && eta_d == 1.0;
  }
  bool lossless() const noexcept { return internal_external_lossless() && eta_det == 1.0; }

  bool operator==(const LossParams&) const = default;
};

struct InterferometerConfig {
  SqueezerParams nbs1;
  SqueezerParams nbs2;
  SplitterParams splitter;
  CoherentInput coherent;
  PhaseShift phase;
  LossParams loss;

  bool operator==(const InterferometerConfig&) const = default;
};

/// Kerr medium description used to convert between chi(3) and the nonlinear phase.
struct KerrMediumSpec {
  double n0 = 1.0;
  double intensity = 1.0;   ///< drive intensity <I_d1>, W/m^2
  double wavenumber = 1.0;  ///< k_d1, 1/m
  double length = 1.0;      ///< L, m
  double epsilon0 = 8.8541878128e-12;
  double c = 299792458.0;

  bool operator==(const KerrMediumSpec&) const = default;
};

/// Lists every violated invariant; empty iff the config is valid.
std::vector<FieldError> check(const InterferometerConfig& config);
std::vector<FieldError> check(const KerrMediumSpec& medium);

/// Returns the config unchanged if valid, otherwise throws ValidationError.
InterferometerConfig validate(const InterferometerConfig& config);
KerrMediumSpec validate(const KerrMediumSpec& medium);

/// N_ps = 2 g1^2 + |alpha|^2 (both squeezer modes counted).
double phase_sensing_photons(const InterferometerConfig& config);

/// Scalar config fields addressable by name ("nbs1.gain", "loss.eta_d", ...).
/// Used by the sweep engine and by canonical serialization.
std::vector<std::string> field_names();

/// Canonical text form (one `name = value` per line, 17 significant digits).
std::string canonical_text(const InterferometerConfig& config);

/// 16-hex-digit FNV-1a digest of canonical_text.
std::string digest(const InterferometerConfig& config);

}  // namespace kerrmzi
