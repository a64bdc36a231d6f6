#include "kerrmzi/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "kerrmzi/analytic.hpp"

namespace kerrmzi::sweep {
namespace {

using Setter = std::function<void(InterferometerConfig&, double)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"g1", [](InterferometerConfig& c, double v) { c.nbs1 = SqueezerParams::from_g(v, c.nbs1.phase); }},
      {"g2", [](InterferometerConfig& c, double v) { c.nbs2 = SqueezerParams::from_g(v, c.nbs2.phase); }},
      {"g2_over_g1",
       [](InterferometerConfig& c, double v) { c.nbs2 = SqueezerParams::from_g(v * c.nbs1.g(), c.nbs2.phase); }},
      {"gain1", [](InterferometerConfig& c, double v) { c.nbs1.gain = v; }},
      {"gain2", [](InterferometerConfig& c, double v) { c.nbs2.gain = v; }},
      {"theta1", [](InterferometerConfig& c, double v) { c.nbs1.phase = v; }},
      {"theta2", [](InterferometerConfig& c, double v) { c.nbs2.phase = v; }},
      {"transmissivity", [](InterferometerConfig& c, double v) { c.splitter.transmissivity = v; }},
      {"r_over_t", [](InterferometerConfig& c, double v) { c.splitter = SplitterParams::from_ratio(v); }},
      {"alpha", [](InterferometerConfig& c, double v) { c.coherent.magnitude = v; }},
      {"theta_alpha", [](InterferometerConfig& c, double v) { c.coherent.phase = v; }},
      {"phi_l", [](InterferometerConfig& c, double v) { c.phase.linear = v; }},
      {"eta_a", [](InterferometerConfig& c, double v) { c.loss.eta_a = v; }},
      {"eta_b", [](InterferometerConfig& c, double v) { c.loss.eta_b = v; }},
      {"eta_c", [](InterferometerConfig& c, double v) { c.loss.eta_c = v; }},
      {"eta_d", [](InterferometerConfig& c, double v) { c.loss.eta_d = v; }},
      {"eta_det", [](InterferometerConfig& c, double v) { c.loss.eta_det = v; }},
      {"eta_ab", [](InterferometerConfig& c, double v) { c.loss.eta_a = c.loss.eta_b = v; }},
      {"eta_cd", [](InterferometerConfig& c, double v) { c.loss.eta_c = c.loss.eta_d = v; }},
  };
  return table;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

SweepRow evaluate(const InterferometerConfig& config, std::vector<double> axis_values) {
  SweepRow row;
  row.axis_values = std::move(axis_values);
  const double n_ps = phase_sensing_photons(config);
  row.sql = n_ps > 0.0 ? analytic::sql_nonlinear(n_ps) : kInf;
  const double g1 = config.nbs1.g();
  const double f = analytic::qfi_nonlinear(config.coherent.photon_number(), 2.0 * g1 * g1, config.splitter).f;
  row.qcrb = f > 0.0 ? analytic::qcrb(f) : kInf;
  try {
    row.delta_phi = analytic::sensitivity(config).delta_phi;
    row.defined = true;
  } catch (const UndefinedSensitivity&) {
    row.delta_phi = kInf;
    row.defined = false;
  }
  row.beats_sql = row.defined && row.delta_phi < row.sql;
  return row;
}

std::vector<std::size_t> shape(const SweepSpec& spec) {
  std::vector<std::size_t> s;
  for (const auto& axis : spec.axes) s.push_back(axis.values.size());
  return s;
}

// Sensitivity along one parameter; undefined or invalid points count as +inf.
double delta_phi_at(InterferometerConfig config, const std::string& name, double value) {
  set_parameter(config, name, value);
  if (!check(config).empty()) return kInf;
  try {
    return analytic::sensitivity(config).delta_phi;
  } catch (const UndefinedSensitivity&) {
    return kInf;
  } catch (const DomainError&) {
    return kInf;
  }
}

void put(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

std::vector<std::string> parameter_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : setters()) names.push_back(name);
  return names;
}

bool is_parameter(const std::string& name) { return setters().count(name) != 0; }

void set_parameter(InterferometerConfig& config, const std::string& name, double value) {
  const auto it = setters().find(name);
  if (it == setters().end()) throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  it->second(config, value);
}

Axis Axis::linear(std::string name, double min, double max, int points) {
  Axis axis{std::move(name), {}};
  if (points < 1) return axis;
  axis.values.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    axis.values.push_back(points == 1 ? min : min + (max - min) * k / (points - 1));
  }
  if (points > 1) axis.values.back() = max;
  return axis;
}

void validate(const SweepSpec& spec) {
  std::vector<FieldError> errors;
  for (const auto& e : check(spec.base)) errors.push_back({"base." + e.field, e.message});
  if (spec.axes.empty() || spec.axes.size() > 2) errors.push_back({"axes", "expected one or two axes"});
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    const Axis& axis = spec.axes[k];
    const std::string field = "axes[" + std::to_string(k) + "]";
    if (!is_parameter(axis.name)) errors.push_back({field + ".name", "unknown parameter '" + axis.name + "'"});
    if (axis.values.size() < 2) errors.push_back({field + ".points", "point count must be >= 2"});
    for (double v : axis.values) {
      if (!std::isfinite(v)) {
        errors.push_back({field + ".values", "non-finite value"});
        break;
      }
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  validate(spec);
  const auto dims = shape(spec);
  std::size_t total = 1;
  for (auto d : dims) total *= d;

  // Materialize every grid config first so invalid points fail before any work.
  std::vector<InterferometerConfig> configs(total, spec.base);
  std::vector<std::vector<double>> coords(total);
  std::vector<FieldError> errors;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    std::vector<double> point(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
      point[k] = spec.axes[k].values[rem % dims[k]];
      rem /= dims[k];
    }
    for (std::size_t k = 0; k < dims.size(); ++k) set_parameter(configs[idx], spec.axes[k].name, point[k]);
    for (const auto& e : check(configs[idx])) {
      errors.push_back({"grid point " + std::to_string(idx) + " " + e.field, e.message});
    }
    coords[idx] = std::move(point);
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  SweepResult result;
  for (const auto& axis : spec.axes) result.axis_names.push_back(axis.name);
  result.rows.resize(total);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t idx = w; idx < total; idx += threads) result.rows[idx] = evaluate(configs[idx], coords[idx]);
      });
    }
  }
  return result;
}

void write_csv(std::ostream& out, const SweepResult& result) {
  for (const auto& name : result.axis_names) out << name << ',';
  out << "delta_phi,sql,qcrb,beats_sql,defined\n";
  for (const auto& row : result.rows) {
    for (double v : row.axis_values) {
      put(out, v);
      out << ',';
    }
    put(out, row.delta_phi);
    out << ',';
    put(out, row.sql);
    out << ',';
    put(out, row.qcrb);
    out << ',' << (row.beats_sql ? 1 : 0) << ',' << (row.defined ? 1 : 0) << '\n';
  }
}

ThresholdResult find_sql_threshold(const InterferometerConfig& base, const std::string& name, double lo, double hi,
                                   double rel_tol) {
  static const std::vector<std::string> loss_names = {"eta_a", "eta_b", "eta_c", "eta_d", "eta_det", "eta_ab", "eta_cd"};
  if (std::find(loss_names.begin(), loss_names.end(), name) == loss_names.end()) {
    throw std::invalid_argument("threshold parameter must be a loss transmission, got '" + name + "'");
  }
  if (!(lo < hi)) throw std::invalid_argument("threshold bracket needs lo < hi");
  kerrmzi::validate(base);

  const double sql = analytic::sql_nonlinear(phase_sensing_photons(base));
  const auto excess = [&](double eta) { return delta_phi_at(base, name, eta) - sql; };

  ThresholdResult result;
  double f_hi = excess(hi);
  if (f_hi >= 0.0) {
    result.reason = "no threshold: sensitivity does not beat the SQL at the upper end of the bracket";
    return result;
  }
  double f_lo = excess(lo);
  if (f_lo <= 0.0) {
    result.reason = "no threshold: sensitivity beats the SQL across the whole bracket";
    return result;
  }

  for (result.iterations = 1; result.iterations <= 200; ++result.iterations) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = excess(mid);
    result.eta = mid;
    result.residual = std::abs(f_mid) / sql;
    if (result.residual < rel_tol || mid == lo || mid == hi) break;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.found = result.residual < rel_tol;
  if (!result.found) result.reason = "bisection stalled before reaching the residual tolerance";
  return result;
}

InterferometerConfig figure_base() {
  InterferometerConfig c;
  c.nbs1 = SqueezerParams::from_g(2.0, 0.0);
  c.nbs2 = SqueezerParams::from_g(4.0, std::numbers::pi);
  c.splitter = SplitterParams::from_ratio(3.0);
  c.coherent = {10.0, 0.0};
  return c;
}

std::optional<SweepSpec> preset(const std::string& name) {
  if (name == "fig2") {
    return SweepSpec{figure_base(), {Axis{"r_over_t", {1.0, 3.0, 9.0}}, Axis::linear("g2_over_g1", 0.5, 4.0, 36)}};
  }
  if (name == "fig4a") {
    return SweepSpec{figure_base(), {Axis::linear("eta_c", 0.05, 1.0, 20), Axis::linear("eta_d", 0.05, 1.0, 20)}};
  }
  if (name == "fig4b") {
    return SweepSpec{figure_base(), {Axis::linear("eta_a", 0.05, 1.0, 20), Axis::linear("eta_b", 0.05, 1.0, 20)}};
  }
  return std::nullopt;
}

}  // namespace kerrmzi::sweep
