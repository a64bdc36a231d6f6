#include "kerrmzi/oracle.hpp"

#include <cmath>
#include <sstream>

namespace kerrmzi::oracle {
namespace {

using fock::DensityOperator;
using fock::FockState;
using fock::Mode;

void check_budget(double leaked_before, double leaked_after, const std::string& stage, double budget) {
  const double leaked = leaked_after - leaked_before;
  if (leaked > budget) throw TruncationError(stage, leaked, budget);
}

// Runs one stage on whichever representation the state currently has.
class Pipeline {
 public:
  Pipeline(FockState initial, const OracleOptions& options) : state_(std::move(initial)), options_(options) {}

  template <class Op>
  void stage(const std::string& name, Op&& op) {
    std::visit(
        [&](auto& s) {
          const double before = s.leaked();
          s = op(std::move(s));
          check_budget(before, s.leaked(), name, options_.truncation_budget);
        },
        state_);
  }

  // Loss is trace preserving on the retained levels, so no budget check.
  void loss(double eta, Mode m) {
    if (eta == 1.0) return;
    if (auto* pure = std::get_if<FockState>(&state_)) state_ = DensityOperator(*pure);
    auto& rho = std::get<DensityOperator>(state_);
    rho = fock::apply_loss(std::move(rho), eta, m);
  }

  State release() && { return std::move(state_); }

 private:
  State state_;
  OracleOptions options_;
};

}  // namespace

FockState prepare_input(const InterferometerConfig& config, const OracleOptions& options) {
  FockState state(options.cutoff);
  const auto alpha = std::polar(config.coherent.magnitude, config.coherent.phase);
  const auto amps = fock::coherent_amplitudes(alpha, options.cutoff);
  double kept = 0.0;
  for (const auto& z : amps) kept += std::norm(z);
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail > options.truncation_budget) {
    std::ostringstream os;
    os << "prepare (|alpha|=" << config.coherent.magnitude << ", cutoff=" << options.cutoff << ")";
    throw TruncationError(os.str(), tail, options.truncation_budget);
  }
  auto psi = state.amplitudes();
  const double scale = 1.0 / std::sqrt(kept);
  for (int n = 0; n < options.cutoff; ++n) psi[state.space().index(0, 0, n)] = amps[n] * scale;
  state.add_leakage(tail);
  return state;
}

State simulate(const InterferometerConfig& config, double phi_n, const OracleOptions& options) {
  validate(config);
  const double T = config.splitter.transmissivity;
  const LossParams& loss = config.loss;
  const int pad = options.squeezer_padding;

  Pipeline p(prepare_input(config, options), options);
  p.stage("nbs1", [&](auto s) {
    return fock::apply_two_mode_squeezer(std::move(s), config.nbs1.gain, config.nbs1.phase, Mode::a, Mode::b, pad);
  });
  p.stage("bs1", [&](auto s) { return fock::apply_beam_splitter(std::move(s), T, Mode::b, Mode::c); });
  p.stage("kerr", [&](auto s) { return fock::apply_kerr(std::move(s), config.phase.linear, phi_n, Mode::b); });
  p.loss(loss.eta_d, Mode::b);
  p.loss(loss.eta_c, Mode::c);
  p.stage("bs2", [&](auto s) { return fock::apply_beam_splitter(std::move(s), T, Mode::b, Mode::c); });
  p.loss(loss.eta_a, Mode::a);
  p.loss(loss.eta_b, Mode::b);
  p.stage("nbs2", [&](auto s) {
    return fock::apply_two_mode_squeezer(std::move(s), config.nbs2.gain, config.nbs2.phase, Mode::a, Mode::b, pad);
  });
  p.loss(loss.eta_det, Mode::a);
  return std::move(p).release();
}

fock::QuadratureStats quadrature_stats(const State& state, fock::Mode mode) {
  return std::visit([&](const auto& s) { return fock::quadrature_stats(s, mode); }, state);
}

SlopeEstimate numeric_slope(const InterferometerConfig& config, const OracleOptions& options,
                            const SlopeOptions& slope) {
  const auto mean_at = [&](double phi_n) {
    return quadrature_stats(simulate(config, phi_n, options), Mode::a).mean;
  };
  const double d = slope.delta;
  SlopeEstimate est;
  est.coarse = (mean_at(d) - mean_at(-d)) / (2.0 * d);
  est.fine = (mean_at(d / 2.0) - mean_at(-d / 2.0)) / d;
  est.value = (4.0 * est.fine - est.coarse) / 3.0;
  est.error_estimate = std::abs(est.coarse - est.fine);
  if (est.error_estimate > slope.rel_tol * std::abs(est.value) + slope.abs_tol) {
    std::ostringstream os;
    os << "numeric slope did not converge: step " << d << " gives " << est.coarse << ", step " << d / 2.0
       << " gives " << est.fine;
    throw ConvergenceError(os.str());
  }
  return est;
}

double oracle_qfi(const InterferometerConfig& config, const OracleOptions& options) {
  validate(config);
  if (!config.loss.lossless()) throw Unsupported("oracle QFI is defined for lossless (pure-state) configs only");

  FockState s = prepare_input(config, options);
  double before = s.leaked();
  s = fock::apply_two_mode_squeezer(std::move(s), config.nbs1.gain, config.nbs1.phase, Mode::a, Mode::b,
                                    options.squeezer_padding);
  check_budget(before, s.leaked(), "nbs1", options.truncation_budget);
  before = s.leaked();
  s = fock::apply_beam_splitter(std::move(s), config.splitter.transmissivity, Mode::b, Mode::c);
  check_budget(before, s.leaked(), "bs1", options.truncation_budget);

  const double n2 = fock::photon_moment(s, Mode::b, 2);
  const double n4 = fock::photon_moment(s, Mode::b, 4);
  return 4.0 * (n4 - n2 * n2);
}

}  // namespace kerrmzi::oracle
