#include "kerrmzi/report_io.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

namespace kerrmzi::io {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_json(const analytic::SensitivityReport& r, const InterferometerConfig& config) {
  nlohmann::ordered_json j;
  j["config_digest"] = digest(config);
  j["slope"] = r.slope;
  j["noise"] = r.noise;
  j["delta_phi"] = r.delta_phi;
  j["n_ps"] = r.n_ps;
  j["sql"] = r.sql;
  j["qfi"] = r.qfi;
  j["qcrb"] = r.qcrb;
  j["beats_sql"] = r.beats_sql();
  j["balanced"] = r.terms.has_value();
  j["term_lin"] = r.terms ? nlohmann::ordered_json(r.terms->linear) : nlohmann::ordered_json(nullptr);
  j["term_nonlin"] = r.terms ? nlohmann::ordered_json(r.terms->nonlinear) : nlohmann::ordered_json(nullptr);
  j["term_nonlin_corr"] = r.terms ? nlohmann::ordered_json(r.terms->nonlinear_corr) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

std::string report_csv(const analytic::SensitivityReport& r, const InterferometerConfig& config) {
  std::ostringstream os;
  os << "config_digest,slope,noise,delta_phi,n_ps,sql,qfi,qcrb,beats_sql,balanced,term_lin,term_nonlin,"
        "term_nonlin_corr\n";
  os << digest(config) << ',' << fmt(r.slope) << ',' << fmt(r.noise) << ',' << fmt(r.delta_phi) << ','
     << fmt(r.n_ps) << ',' << fmt(r.sql) << ',' << fmt(r.qfi) << ',' << fmt(r.qcrb) << ','
     << (r.beats_sql() ? 1 : 0) << ',' << (r.terms ? 1 : 0) << ',';
  if (r.terms) {
    os << fmt(r.terms->linear) << ',' << fmt(r.terms->nonlinear) << ',' << fmt(r.terms->nonlinear_corr);
  } else {
    os << ",,";
  }
  os << '\n';
  return os.str();
}

std::string report_text(const analytic::SensitivityReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "delta_phi = %.6e  (SQL %.6e, QCRB %.6e) -> %s\nslope = %.6e  noise = %.6f  N_ps = %.6g\n",
                r.delta_phi, r.sql, r.qcrb, r.beats_sql() ? "beats SQL" : "does not beat SQL", r.slope, r.noise,
                r.n_ps);
  std::string out = buf;
  if (r.terms) {
    std::snprintf(buf, sizeof buf, "balanced terms: T_lin = %.6g  T_nonlin = %.6g  T_nonlin&corr = %.6g\n",
                  r.terms->linear, r.terms->nonlinear, r.terms->nonlinear_corr);
    out += buf;
  }
  return out;
}

}  // namespace kerrmzi::io
