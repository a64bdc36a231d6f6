#pragma once
// Brute-force simulation of the full interferometer in a truncated Fock space.
// Slot a carries the TMSV partner, slot b the NBS1 signal arm (and, between
// the beam splitters, the Kerr arm d), slot c the coherent seed.

#include <string>
#include <variant>

#include "kerrmzi/fock.hpp"
#include "kerrmzi/model.hpp"

namespace kerrmzi::oracle {

struct OracleOptions {
  int cutoff = 15;
  double truncation_budget = 1e-8;  ///< max norm^2 dropped per stage
  int squeezer_padding = -1;        ///< extra levels for the squeezer exponential; < 0 means cutoff
};

using State = std::variant<fock::FockState, fock::DensityOperator>;

/// |0>_a |0>_b |alpha>_c, renormalized after truncation.
/// Throws TruncationError if the coherent tail weight exceeds the budget.
fock::FockState prepare_input(const InterferometerConfig& config, const OracleOptions& options);

/// Full pipeline at nonlinear phase phi_n (linear phase from the config):
/// NBS1(a,b) -> BS1(b,c) -> Kerr(b) -> loss eta_d(b), eta_c(c) -> BS2(b,c)
/// -> loss eta_a(a), eta_b(b) -> NBS2(a,b) -> loss eta_det(a).
/// Lossless configs stay pure; the state becomes a density operator just
/// before the first stage with eta < 1. Throws TruncationError naming the stage.
State simulate(const InterferometerConfig& config, double phi_n, const OracleOptions& options);

fock::QuadratureStats quadrature_stats(const State& state, fock::Mode mode);

struct SlopeEstimate {
  double value = 0.0;           ///< Richardson-extrapolated d<Y>/d phi_n at phi_n = 0 (signed)
  double coarse = 0.0;          ///< central difference with step delta
  double fine = 0.0;            ///< central difference with step delta / 2
  double error_estimate = 0.0;  ///< |coarse - fine|
};

struct SlopeOptions {
  double delta = 1e-4;
  double rel_tol = 1e-5;
  double abs_tol = 1e-10;
};

/// Central finite difference of <Y_a> around phi_n = 0 with a delta/2
/// Richardson check. Throws ConvergenceError if the two steps disagree beyond
/// rel_tol * |value| + abs_tol.
SlopeEstimate numeric_slope(const InterferometerConfig& config, const OracleOptions& options,
                            const SlopeOptions& slope = {});

/// 4(<n^4> - <n^2>^2) of the Kerr arm just before the phase shifter.
/// Lossy configs throw Unsupported.
double oracle_qfi(const InterferometerConfig& config, const OracleOptions& options);

}  // namespace kerrmzi::oracle
