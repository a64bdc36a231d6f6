#pragma once
// Grid evaluation of the analytic sensitivity and SQL-threshold search along loss axes.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kerrmzi/model.hpp"

namespace kerrmzi::sweep {

/// Names accepted as sweep axes or threshold parameters, e.g. "g2_over_g1",
/// "r_over_t", "transmissivity", "alpha", "eta_d", "eta_ab" (eta_a = eta_b).
std::vector<std::string> parameter_names();

bool is_parameter(const std::string& name);

/// Sets one named parameter on a config. Throws std::invalid_argument for unknown names.
void set_parameter(InterferometerConfig& config, const std::string& name, double value);

struct Axis {
  std::string name;
  std::vector<double> values;

  /// Evenly spaced points from min to max inclusive.
  static Axis linear(std::string name, double min, double max, int points);
};

struct SweepSpec {
  InterferometerConfig base;
  std::vector<Axis> axes;  ///< one or two; applied to the base in this order
};

struct SweepRow {
  std::vector<double> axis_values;
  double delta_phi = 0.0;  ///< +inf when undefined
  double sql = 0.0;
  double qcrb = 0.0;
  bool beats_sql = false;
  bool defined = false;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;  ///< row-major: last axis varies fastest
};

/// Throws ValidationError listing every problem with the spec.
void validate(const SweepSpec& spec);

/// Evaluates every grid point; threads = 0 picks the hardware concurrency.
/// Output is identical for every thread count.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Columns: axis names, delta_phi, sql, qcrb, beats_sql, defined. 17 significant digits.
void write_csv(std::ostream& out, const SweepResult& result);

struct ThresholdResult {
  bool found = false;
  double eta = 0.0;       ///< crossing point when found
  double residual = 0.0;  ///< |delta_phi(eta) - SQL| / SQL
  int iterations = 0;
  std::string reason;     ///< why no threshold exists, when !found
};

/// Bisects the loss parameter `name` (eta_a, eta_b, eta_c, eta_d, eta_det,
/// eta_ab, eta_cd) for delta_phi = SQL, other losses held at the base values.
/// Assumes delta_phi decreases with eta. Returns found = false when the
/// bracket [lo, hi] holds no crossing.
ThresholdResult find_sql_threshold(const InterferometerConfig& base, const std::string& name, double lo = 0.0,
                                   double hi = 1.0, double rel_tol = 1e-6);

/// Built-in figure presets.
/// fig2: R/T in {1, 3, 9} stacked with g2/g1 in [0.5, 4], |alpha| = 10, g1 = 2.
/// fig4a: (eta_c, eta_d) grid; fig4b: (eta_a, eta_b) grid; |alpha| = 10, g1 = 2, g2 = 4, R/T = 3.
std::optional<SweepSpec> preset(const std::string& name);

/// |alpha| = 10, g1 = 2, g2 = 4, R/T = 3, theta_alpha = theta_1 = 0, theta_2 = pi.
InterferometerConfig figure_base();

}  // namespace kerrmzi::sweep
