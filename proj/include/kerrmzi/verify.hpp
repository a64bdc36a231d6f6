#pragma once
// Verification suites: algebraic identities of the closed forms ("analytic")
// and closed forms against the Fock-space simulation ("oracle").

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kerrmzi/model.hpp"
#include "kerrmzi/oracle.hpp"

namespace kerrmzi::verify {

enum class Suite { analytic, oracle, all };

/// Deliberately wrong coefficients, used as negative controls.
enum class Mutation {
  none,
  slope_coefficient,  ///< 4 T g1^2 -> 2 T g1^2 in the lossless slope
  noise_cross_term,   ///< sign of the 4 G1 G2 g1 g2 cos term flipped
  qfi_s2,             ///< 88 N_g -> 86 N_g in s2
};

std::optional<Suite> parse_suite(const std::string& name);
std::optional<Mutation> parse_mutation(const std::string& name);

struct VerificationRecord {
  std::string check;
  std::string config_digest;  ///< empty for checks aggregated over random draws
  double analytic = 0.0;
  double oracle = 0.0;  ///< the independent route (simulation or second formula)
  double relative_error = 0.0;
  double tolerance = 0.0;
  int cutoff = 0;  ///< 0 for checks without a Fock space
  bool converged = true;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  int cutoff = 15;             ///< starting cutoff for lossless oracle checks
  int lossy_cutoff = 8;        ///< cutoff for density-operator checks
  int random_configs = 2;      ///< randomized lossless configs on top of the canonical one
  int random_loss_tuples = 5;  ///< randomized (eta_a, eta_b, eta_c, eta_d) tuples
  int qfi_configs = 4;         ///< randomized configs for the QFI cross-check
  Mutation mutation = Mutation::none;
};

std::vector<VerificationRecord> run_suite(Suite suite, const SuiteOptions& options = {});

/// The small configuration used throughout the oracle checks:
/// alpha = 1, g1 = 0.3, g2 = 0.6, theta_1 = 0, theta_2 = pi, theta_alpha = 0, T = 0.25.
InterferometerConfig canonical_small_config();

/// Smallest cutoff >= start (in steps of 5, at most max_cutoff) at which the
/// simulation stays within the truncation budget at every stage.
int required_cutoff(const InterferometerConfig& config, oracle::OracleOptions options, int max_cutoff = 80);

struct OracleComparison {
  double analytic = 0.0;
  double oracle = 0.0;
  double oracle_refined = 0.0;  ///< same quantity at the refined cutoff
  int cutoff = 0;
  int refined_cutoff = 0;
};

/// Slope and variance at phi = 0, oracle vs closed form (lossy formulas when eta < 1).
OracleComparison compare_slope(const InterferometerConfig& config, const oracle::OracleOptions& options,
                               int refined_cutoff);
OracleComparison compare_variance(const InterferometerConfig& config, const oracle::OracleOptions& options,
                                  int refined_cutoff);
OracleComparison compare_qfi(const InterferometerConfig& config, const oracle::OracleOptions& options,
                             int refined_cutoff);

double relative_error(double value, double reference);

std::string records_json(const std::vector<VerificationRecord>& records);

}  // namespace kerrmzi::verify
