#include "kerrmzi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "kerrmzi/analytic.hpp"
#include "kerrmzi/errors.hpp"

namespace kerrmzi::verify {
namespace {

using analytic::complex;
using std::numbers::pi;

constexpr int kDraws = 10000;
constexpr int kReductionDraws = 1000;

constexpr double kIdentityTol = 1e-12;
constexpr double kReductionTol = 1e-14;
constexpr double kReassemblyTol = 1e-10;
constexpr double kArgmaxTol = 1e-4;
constexpr double kSlopeTol = 1e-3;
constexpr double kVarianceTol = 1e-4;
constexpr double kQfiTol = 1e-3;
constexpr double kLossyTol = 1e-3;
constexpr double kDoublingTol = 1e-5;
constexpr double kLossyRefineTol = 1e-3;
constexpr double kLossyBudget = 1e-3;
constexpr double kQfiBudget = 1e-10;  // fourth moments amplify the truncated tail

// Closed forms as seen by the checks; a mutation swaps in a wrong coefficient.
struct Model {
  Mutation mutation = Mutation::none;

  double slope(const InterferometerConfig& c) const {
    if (c.loss.lossless()) {
      if (mutation == Mutation::slope_coefficient) {
        const double t = c.splitter.transmissivity, r = c.splitter.reflectivity();
        const double na = c.coherent.photon_number(), g1 = c.nbs1.g();
        return 2.0 * c.nbs2.g() * std::sqrt(t * r) * std::sqrt(na) * (1.0 + 2.0 * r * na + 2.0 * t * g1 * g1) *
               std::abs(std::cos(c.nbs2.phase - c.coherent.phase));
      }
      return analytic::slope_at_zero(c);
    }
    return analytic::sensitivity(c).slope;
  }

  double noise(const InterferometerConfig& c) const {
    const double base = c.loss.lossless() ? analytic::noise_at_zero(c) : analytic::sensitivity(c).noise;
    if (mutation != Mutation::noise_cross_term) return base;
    const double cross = 4.0 * c.nbs2.gain * c.nbs1.gain * c.nbs1.g() * c.nbs2.g() *
                         std::cos(c.nbs2.phase - c.nbs1.phase);
    return base - 2.0 * cross;
  }

  double qfi(double n_alpha, double n_g, const SplitterParams& s) const {
    const double f = analytic::qfi_nonlinear(n_alpha, n_g, s).f;
    if (mutation != Mutation::qfi_s2) return f;
    const double R = s.reflectivity(), T = s.transmissivity;
    return f - n_alpha * n_alpha * R * R * R * T * 2.0 * n_g;
  }
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

 private:
  std::mt19937_64 engine_;
};

InterferometerConfig random_config(Rng& rng, double g_max) {
  InterferometerConfig c;
  c.nbs1 = SqueezerParams::from_g(rng.uniform(0.0, g_max), rng.uniform(0.0, 2.0 * pi));
  c.nbs2 = SqueezerParams::from_g(rng.uniform(0.0, g_max), rng.uniform(0.0, 2.0 * pi));
  c.splitter.transmissivity = rng.uniform(0.0, 1.0);
  c.coherent = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 2.0 * pi)};
  return c;
}

InterferometerConfig random_lossy_config(Rng& rng, double g_max) {
  InterferometerConfig c = random_config(rng, g_max);
  c.loss.eta_a = rng.uniform(0.05, 1.0);
  c.loss.eta_b = rng.uniform(0.05, 1.0);
  c.loss.eta_c = rng.uniform(0.05, 1.0);
  c.loss.eta_d = rng.uniform(0.05, 1.0);
  return c;
}

// Small configurations the Fock oracle can handle with modest cutoffs.
InterferometerConfig random_small_config(Rng& rng) {
  static constexpr double kTs[] = {0.25, 0.5, 0.75};
  InterferometerConfig c;
  const double theta_alpha = rng.uniform(0.0, 2.0 * pi);
  c.coherent = {std::sqrt(rng.uniform(0.1, 2.0)), theta_alpha};
  c.nbs1 = SqueezerParams::from_g(rng.uniform(0.05, 0.5), rng.uniform(0.0, 2.0 * pi));
  c.nbs2 = SqueezerParams::from_g(rng.uniform(0.1, 1.0), theta_alpha + pi * rng.pick(2));
  c.splitter.transmissivity = kTs[rng.pick(3)];
  return c;
}

// Running worst case of an aggregated identity check.
struct Worst {
  double error = -1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;

  void update(double lhs_value, double rhs_value, double err, const std::string& what = {}) {
    if (!(err <= error)) {  // also catches NaN
      error = err;
      lhs = lhs_value;
      rhs = rhs_value;
      detail = what;
    }
  }

  VerificationRecord record(const std::string& name, double tol) const {
    VerificationRecord r;
    r.check = name;
    r.analytic = lhs;
    r.oracle = rhs;
    r.relative_error = error;
    r.tolerance = tol;
    r.passed = error <= tol;
    r.detail = detail;
    return r;
  }
};

std::string describe(const InterferometerConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "G1=" << c.nbs1.gain << " th1=" << c.nbs1.phase << " G2=" << c.nbs2.gain << " th2=" << c.nbs2.phase
     << " T=" << c.splitter.transmissivity << " |alpha|=" << c.coherent.magnitude
     << " th_alpha=" << c.coherent.phase;
  return os.str();
}

double absolute_error(double value, double reference) { return std::abs(value - reference); }

// ---------------------------------------------------------------- analytic

void unitarity(Rng& rng, std::vector<VerificationRecord>& out) {
  Worst w;
  for (int k = 0; k < kDraws; ++k) {
    SplitterParams s{rng.uniform(0.0, 1.0)};
    PhaseShift p{rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    const int n = rng.pick(50);
    const auto tc = analytic::transfer_coefficients(s, SqueezerParams{}, SqueezerParams{}, p, n);
    const double u1 = std::norm(tc.m1) + std::norm(tc.m0);
    const double u2 = std::norm(tc.m2) + std::norm(tc.m0);
    w.update(u1, 1.0, absolute_error(u1, 1.0), "|M1|^2+|M0|^2");
    w.update(u2, 1.0, absolute_error(u2, 1.0), "|M2|^2+|M0|^2");
  }
  out.push_back(w.record("unitarity.splitter", kIdentityTol));
}

void commutators(Rng& rng, std::vector<VerificationRecord>& out) {
  Worst wa, wb, wc;
  for (int k = 0; k < kDraws; ++k) {
    const auto c = random_config(rng, 3.0);
    PhaseShift p{rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
    const int n = rng.pick(50);
    const auto tc = analytic::transfer_coefficients(c.splitter, c.nbs1, c.nbs2, p, n);
    const double ca = std::norm(tc.a) - std::norm(tc.b) - std::norm(tc.c);
    const double cb = std::norm(tc.e) + std::norm(tc.f) - std::norm(tc.d);
    const double cc = std::norm(tc.m2) + std::norm(tc.h) - std::norm(tc.i);
    wa.update(ca, 1.0, absolute_error(ca, 1.0), describe(c));
    wb.update(cb, 1.0, absolute_error(cb, 1.0), describe(c));
    wc.update(cc, 1.0, absolute_error(cc, 1.0), describe(c));
  }
  out.push_back(wa.record("commutator.a3", kIdentityTol));
  out.push_back(wb.record("commutator.b3", kIdentityTol));
  out.push_back(wc.record("commutator.c2", kIdentityTol));
}

void lossless_reduction(Rng& rng, const Model& model, std::vector<VerificationRecord>& out) {
  Worst ws, wn, wd;
  for (int k = 0; k < kReductionDraws; ++k) {
    const auto c = random_config(rng, 5.0);
    const double s0 = model.slope(c), s1 = analytic::lossy_slope_at_zero(c);
    const double n0 = model.noise(c), n1 = analytic::lossy_noise_at_zero(c);
    ws.update(s1, s0, relative_error(s1, s0), describe(c));
    wn.update(n1, n0, relative_error(n1, n0), describe(c));
    if (s0 > 0.0 && n0 > 0.0) {
      const double d0 = std::sqrt(n0) / s0;
      const double d1 = analytic::detection_loss_sensitivity(c);
      wd.update(d1, d0, relative_error(d1, d0), describe(c));
    }
  }
  out.push_back(ws.record("lossless_reduction.slope", kReductionTol));
  out.push_back(wn.record("lossless_reduction.noise", kReductionTol));
  out.push_back(wd.record("lossless_reduction.detection", kReductionTol));
}

void slope_forms(Rng& rng, std::vector<VerificationRecord>& out) {
  // 4 T g1^2 (lossless slope) against 2 T N_g (lossy slope) at unit efficiencies.
  Worst w;
  for (int k = 0; k < kReductionDraws; ++k) {
    const double t = rng.uniform(0.0, 1.0), g1 = rng.uniform(0.0, 5.0);
    const double lhs = 4.0 * t * g1 * g1;
    const double rhs = 2.0 * t * (2.0 * g1 * g1);
    w.update(lhs, rhs, relative_error(lhs, rhs));
  }
  out.push_back(w.record("consistency.slope_forms", kIdentityTol));
}

void qfi_checks(Rng& rng, const Model& model, std::vector<VerificationRecord>& out) {
  Worst wr, wm;
  for (int k = 0; k < kReductionDraws; ++k) {
    const double na = rng.uniform(0.0, 100.0);
    const double ng = rng.uniform(0.0, 20.0);
    const SplitterParams s{rng.uniform(0.0, 1.0)};
    const auto q = analytic::qfi_nonlinear(na, ng, s);
    const double horner = ((q.s1 * na + q.s2) * na + q.s3) * na + q.s4;
    const double f = model.qfi(na, ng, s);
    wr.update(f, horner, relative_error(f, horner));

    const double lin = analytic::qfi_linear(na, ng, s);
    const double mom = analytic::qfi_linear_from_moments(na, ng, s);
    wm.update(lin, mom, relative_error(lin, mom));
  }
  out.push_back(wr.record("qfi.reassembly", kReassemblyTol));
  out.push_back(wm.record("qfi_linear.moments", kIdentityTol));

  Worst ws;
  for (double ng : {0.5, 1.0, 2.0, 8.0}) {
    const double lin = analytic::qfi_linear(0.0, ng, SplitterParams{0.5});
    const double special = 0.25 * (ng * (ng + 2.0) + 2.0 * ng);
    ws.update(lin, special, relative_error(lin, special), "N_g=" + std::to_string(ng));
  }
  out.push_back(ws.record("qfi_linear.special_case", kIdentityTol));
}

void split_ratio(Rng& rng, std::vector<VerificationRecord>& out) {
  Worst w;
  for (int k = 0; k < 100; ++k) {
    const double na = rng.uniform(0.0, 1e4), g1 = rng.uniform(0.0, 5.0);
    const double t_closed = analytic::transmissivity_from_ratio(analytic::optimal_split_ratio(na, g1));
    const double t_numeric = analytic::transmissivity_from_ratio(analytic::numeric_optimal_split_ratio(na, g1));
    std::ostringstream os;
    os << "N_alpha=" << na << " g1=" << g1;
    w.update(t_closed, t_numeric, absolute_error(t_closed, t_numeric), os.str());
  }
  out.push_back(w.record("split_ratio.argmax", kArgmaxTol));
}

void balanced(Rng& rng, const Model& model, std::vector<VerificationRecord>& out) {
  Worst wd, wl;
  for (int k = 0; k < kReductionDraws; ++k) {
    InterferometerConfig c;
    const double g = rng.uniform(0.01, 5.0);
    c.nbs1 = SqueezerParams::from_g(g, 0.0);
    c.nbs2 = SqueezerParams::from_g(g, pi);
    c.splitter.transmissivity = rng.uniform(0.01, 0.99);
    c.coherent = {rng.uniform(0.1, 10.0), 0.0};
    const auto t = analytic::balanced_terms(c);
    const double sum = c.nbs2.g() * (t.linear + t.nonlinear + t.nonlinear_corr);
    const double s = model.slope(c);
    wd.update(sum, s, relative_error(sum, s), describe(c));

    const double base = std::sqrt(model.noise(c)) / s;
    for (int e = 1; e <= 10; ++e) {
      InterferometerConfig lossy = c;
      lossy.loss.eta_det = 0.1 * e;
      const double scaled = analytic::detection_loss_sensitivity(lossy) * std::sqrt(lossy.loss.eta_det);
      wl.update(scaled, base, relative_error(scaled, base), describe(c));
    }
  }
  out.push_back(wd.record("balanced.decomposition", kIdentityTol));
  out.push_back(wl.record("detection_loss.identity", kIdentityTol));
}

void quantum_bound(Rng& rng, std::vector<VerificationRecord>& out) {
  Worst w;
  for (int k = 0; k < kReductionDraws; ++k) {
    const auto c = k % 2 ? random_lossy_config(rng, 5.0) : random_config(rng, 5.0);
    try {
      const auto rep = analytic::sensitivity(c);
      // Positive when the bound is violated.
      w.update(rep.delta_phi, rep.qcrb, std::max(0.0, (rep.qcrb - rep.delta_phi) / rep.qcrb), describe(c));
    } catch (const UndefinedSensitivity&) {
    } catch (const DomainError&) {
    }
  }
  out.push_back(w.record("quantum_bound", 0.0));
}

// ---------------------------------------------------------------- oracle

VerificationRecord oracle_record(const std::string& name, const InterferometerConfig& config,
                                 const OracleComparison& cmp, double tol, double refine_tol) {
  VerificationRecord r;
  r.check = name;
  r.config_digest = digest(config);
  r.analytic = cmp.analytic;
  r.oracle = cmp.oracle;
  r.relative_error = relative_error(cmp.oracle, cmp.analytic);
  r.tolerance = tol;
  r.cutoff = cmp.cutoff;
  r.converged = relative_error(cmp.oracle, cmp.oracle_refined) <= refine_tol;
  r.passed = r.relative_error <= tol && r.converged;
  std::ostringstream os;
  os.precision(17);
  os << "refined cutoff " << cmp.refined_cutoff << " -> " << cmp.oracle_refined;
  r.detail = os.str();
  return r;
}

VerificationRecord failure_record(const std::string& name, const InterferometerConfig& config,
                                  const std::exception& e) {
  VerificationRecord r;
  r.check = name;
  r.config_digest = digest(config);
  r.relative_error = std::numeric_limits<double>::infinity();
  r.converged = false;
  r.passed = false;
  r.detail = e.what();
  return r;
}

template <class Fn>
void guarded(std::vector<VerificationRecord>& out, const std::string& name, const InterferometerConfig& config,
             Fn&& fn) {
  try {
    out.push_back(fn());
  } catch (const std::exception& e) {
    out.push_back(failure_record(name, config, e));
  }
}

void lossless_oracle(const InterferometerConfig& config, const Model& model, const SuiteOptions& options,
                     std::vector<VerificationRecord>& out) {
  oracle::OracleOptions o;
  o.cutoff = options.cutoff;
  guarded(out, "oracle.slope", config, [&] {
    o.cutoff = required_cutoff(config, o);
    auto cmp = compare_slope(config, o, 2 * o.cutoff);
    cmp.analytic = model.slope(config);
    return oracle_record("oracle.slope", config, cmp, kSlopeTol, kDoublingTol);
  });
  guarded(out, "oracle.variance", config, [&] {
    auto cmp = compare_variance(config, o, 2 * o.cutoff);
    cmp.analytic = model.noise(config);
    return oracle_record("oracle.variance", config, cmp, kVarianceTol, kDoublingTol);
  });
}

void qfi_oracle(const InterferometerConfig& config, const Model& model, const SuiteOptions& options,
                std::vector<VerificationRecord>& out) {
  guarded(out, "oracle.qfi", config, [&] {
    oracle::OracleOptions o;
    o.cutoff = options.cutoff;
    o.truncation_budget = kQfiBudget;
    for (;; o.cutoff += 5) {
      try {
        (void)oracle::oracle_qfi(config, o);
        break;
      } catch (const TruncationError&) {
        if (o.cutoff >= 80) throw;
      }
    }
    auto cmp = compare_qfi(config, o, 2 * o.cutoff);
    const double g1 = config.nbs1.g();
    cmp.analytic = model.qfi(config.coherent.photon_number(), 2.0 * g1 * g1, config.splitter);
    return oracle_record("oracle.qfi", config, cmp, kQfiTol, kDoublingTol);
  });
}

void lossy_oracle(const InterferometerConfig& config, const Model& model, const SuiteOptions& options,
                  std::vector<VerificationRecord>& out) {
  oracle::OracleOptions o;
  o.cutoff = options.lossy_cutoff;
  o.truncation_budget = kLossyBudget;
  const int refined = options.lossy_cutoff + 2;
  guarded(out, "oracle.lossy_slope", config, [&] {
    auto cmp = compare_slope(config, o, refined);
    cmp.analytic = model.slope(config);
    return oracle_record("oracle.lossy_slope", config, cmp, kLossyTol, kLossyRefineTol);
  });
  guarded(out, "oracle.lossy_variance", config, [&] {
    auto cmp = compare_variance(config, o, refined);
    cmp.analytic = model.noise(config);
    return oracle_record("oracle.lossy_variance", config, cmp, kLossyTol, kLossyRefineTol);
  });
}

InterferometerConfig lossy_small_config(Rng& rng) {
  InterferometerConfig c = canonical_small_config();
  c.coherent.magnitude = rng.uniform(0.5, 1.0);
  c.nbs1 = SqueezerParams::from_g(rng.uniform(0.1, 0.3), 0.0);
  c.loss.eta_a = rng.uniform(0.5, 1.0);
  c.loss.eta_b = rng.uniform(0.5, 1.0);
  c.loss.eta_c = rng.uniform(0.5, 1.0);
  c.loss.eta_d = rng.uniform(0.5, 1.0);
  return c;
}

void run_analytic(Rng& rng, const Model& model, std::vector<VerificationRecord>& out) {
  unitarity(rng, out);
  commutators(rng, out);
  lossless_reduction(rng, model, out);
  slope_forms(rng, out);
  qfi_checks(rng, model, out);
  split_ratio(rng, out);
  balanced(rng, model, out);
  quantum_bound(rng, out);
}

void run_oracle(Rng& rng, const Model& model, const SuiteOptions& options, std::vector<VerificationRecord>& out) {
  const auto canonical = canonical_small_config();
  lossless_oracle(canonical, model, options, out);
  qfi_oracle(canonical, model, options, out);
  for (int k = 0; k < options.random_configs; ++k) lossless_oracle(random_small_config(rng), model, options, out);
  for (int k = 0; k < options.qfi_configs; ++k) qfi_oracle(random_small_config(rng), model, options, out);
  for (int k = 0; k < options.random_loss_tuples; ++k) lossy_oracle(lossy_small_config(rng), model, options, out);
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "analytic") return Suite::analytic;
  if (name == "oracle") return Suite::oracle;
  if (name == "all") return Suite::all;
  return std::nullopt;
}

std::optional<Mutation> parse_mutation(const std::string& name) {
  if (name == "none") return Mutation::none;
  if (name == "slope-coefficient") return Mutation::slope_coefficient;
  if (name == "noise-cross-term") return Mutation::noise_cross_term;
  if (name == "qfi-s2") return Mutation::qfi_s2;
  return std::nullopt;
}

InterferometerConfig canonical_small_config() {
  InterferometerConfig c;
  c.coherent = {1.0, 0.0};
  c.nbs1 = SqueezerParams::from_g(0.3, 0.0);
  c.nbs2 = SqueezerParams::from_g(0.6, pi);
  c.splitter.transmissivity = 0.25;
  return c;
}

int required_cutoff(const InterferometerConfig& config, oracle::OracleOptions options, int max_cutoff) {
  for (;; options.cutoff += 5) {
    try {
      (void)oracle::simulate(config, 0.0, options);
      return options.cutoff;
    } catch (const TruncationError&) {
      if (options.cutoff + 5 > max_cutoff) throw;
    }
  }
}

OracleComparison compare_slope(const InterferometerConfig& config, const oracle::OracleOptions& options,
                               int refined_cutoff) {
  OracleComparison cmp;
  cmp.analytic = analytic::sensitivity(config).slope;
  cmp.cutoff = options.cutoff;
  cmp.refined_cutoff = refined_cutoff;
  cmp.oracle = std::abs(oracle::numeric_slope(config, options).value);
  oracle::OracleOptions refined = options;
  refined.cutoff = refined_cutoff;
  cmp.oracle_refined = std::abs(oracle::numeric_slope(config, refined).value);
  return cmp;
}

OracleComparison compare_variance(const InterferometerConfig& config, const oracle::OracleOptions& options,
                                  int refined_cutoff) {
  OracleComparison cmp;
  cmp.analytic = config.loss.lossless() ? analytic::noise_at_zero(config) : analytic::sensitivity(config).noise;
  cmp.cutoff = options.cutoff;
  cmp.refined_cutoff = refined_cutoff;
  cmp.oracle = oracle::quadrature_stats(oracle::simulate(config, 0.0, options), fock::Mode::a).variance;
  oracle::OracleOptions refined = options;
  refined.cutoff = refined_cutoff;
  cmp.oracle_refined = oracle::quadrature_stats(oracle::simulate(config, 0.0, refined), fock::Mode::a).variance;
  return cmp;
}

OracleComparison compare_qfi(const InterferometerConfig& config, const oracle::OracleOptions& options,
                             int refined_cutoff) {
  OracleComparison cmp;
  const double g1 = config.nbs1.g();
  cmp.analytic = analytic::qfi_nonlinear(config.coherent.photon_number(), 2.0 * g1 * g1, config.splitter).f;
  cmp.cutoff = options.cutoff;
  cmp.refined_cutoff = refined_cutoff;
  cmp.oracle = oracle::oracle_qfi(config, options);
  oracle::OracleOptions refined = options;
  refined.cutoff = refined_cutoff;
  cmp.oracle_refined = oracle::oracle_qfi(config, refined);
  return cmp;
}

double relative_error(double value, double reference) {
  if (value == reference) return 0.0;
  return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

std::vector<VerificationRecord> run_suite(Suite suite, const SuiteOptions& options) {
  Rng rng(options.seed);
  const Model model{options.mutation};
  std::vector<VerificationRecord> out;
  if (suite != Suite::oracle) run_analytic(rng, model, out);
  if (suite != Suite::analytic) run_oracle(rng, model, options, out);
  return out;
}

std::string records_json(const std::vector<VerificationRecord>& records) {
  auto num = [](double x) -> nlohmann::ordered_json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["config_digest"] = r.config_digest;
    j["analytic"] = num(r.analytic);
    j["oracle"] = num(r.oracle);
    j["relative_error"] = num(r.relative_error);
    j["tolerance"] = r.tolerance;
    j["cutoff"] = r.cutoff;
    j["converged"] = r.converged;
    j["passed"] = r.passed;
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace kerrmzi::verify
