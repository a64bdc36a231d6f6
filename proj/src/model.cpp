#include "kerrmzi/model.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <utility>

namespace kerrmzi {
namespace {

std::vector<std::pair<std::string, double>> flatten(const InterferometerConfig& c) {
  return {
      {"nbs1.gain", c.nbs1.gain},
      {"nbs1.phase", c.nbs1.phase},
      {"nbs2.gain", c.nbs2.gain},
      {"nbs2.phase", c.nbs2.phase},
      {"splitter.transmissivity", c.splitter.transmissivity},
      {"coherent.magnitude", c.coherent.magnitude},
      {"coherent.phase", c.coherent.phase},
      {"phase.linear", c.phase.linear},
      {"phase.nonlinear", c.phase.nonlinear},
      {"loss.eta_a", c.loss.eta_a},
      {"loss.eta_b", c.loss.eta_b},
      {"loss.eta_c", c.loss.eta_c},
      {"loss.eta_d", c.loss.eta_d},
      {"loss.eta_det", c.loss.eta_det},
  };
}

void require_finite(std::vector<FieldError>& out, const std::string& field, double v) {
  if (!std::isfinite(v)) out.push_back({field, "non-finite value"});
}

void require_closed(std::vector<FieldError>& out, const std::string& field, const std::string& label,
                    double v, double lo, double hi) {
  if (std::isfinite(v) && (v < lo || v > hi)) {
    std::ostringstream os;
    os << label << " outside [" << lo << "," << hi << "]";
    out.push_back({field, os.str()});
  }
}

}  // namespace

std::vector<FieldError> check(const InterferometerConfig& config) {
  std::vector<FieldError> errors;
  for (const auto& [name, value] : flatten(config)) require_finite(errors, name, value);

  for (const auto& [name, sq] : {std::pair{"nbs1.gain", config.nbs1}, std::pair{"nbs2.gain", config.nbs2}}) {
    if (std::isfinite(sq.gain) && sq.gain < 1.0) errors.push_back({name, "gain below 1"});
  }
  require_closed(errors, "splitter.transmissivity", "transmissivity", config.splitter.transmissivity, 0.0, 1.0);
  if (std::isfinite(config.coherent.magnitude) && config.coherent.magnitude < 0.0) {
    errors.push_back({"coherent.magnitude", "magnitude below 0"});
  }
  const LossParams& l = config.loss;
  require_closed(errors, "loss.eta_a", "eta_a", l.eta_a, 0.0, 1.0);
  require_closed(errors, "loss.eta_b", "eta_b", l.eta_b, 0.0, 1.0);
  require_closed(errors, "loss.eta_c", "eta_c", l.eta_c, 0.0, 1.0);
  require_closed(errors, "loss.eta_d", "eta_d", l.eta_d, 0.0, 1.0);
  if (std::isfinite(l.eta_det) && (l.eta_det <= 0.0 || l.eta_det > 1.0)) {
    errors.push_back({"loss.eta_det", "eta_det outside (0,1]"});
  }
  return errors;
}

std::vector<FieldError> check(const KerrMediumSpec& m) {
  std::vector<FieldError> errors;
  const std::pair<const char*, double> fields[] = {
      {"medium.n0", m.n0},         {"medium.intensity", m.intensity}, {"medium.wavenumber", m.wavenumber},
      {"medium.length", m.length}, {"medium.epsilon0", m.epsilon0},   {"medium.c", m.c},
  };
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v)) {
      errors.push_back({name, "non-finite value"});
    } else if (v <= 0.0) {
      errors.push_back({name, "must be strictly positive"});
    }
  }
  return errors;
}

InterferometerConfig validate(const InterferometerConfig& config) {
  auto errors = check(config);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return config;
}

KerrMediumSpec validate(const KerrMediumSpec& medium) {
  auto errors = check(medium);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return medium;
}

double phase_sensing_photons(const InterferometerConfig& config) {
  const double g1 = config.nbs1.g();
  return 2.0 * g1 * g1 + config.coherent.photon_number();
}

std::vector<std::string> field_names() {
  std::vector<std::string> names;
  for (auto& [name, _] : flatten(InterferometerConfig{})) names.push_back(name);
  return names;
}

std::string canonical_text(const InterferometerConfig& config) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : flatten(config)) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += name + " = " + buf + "\n";
  }
  return out;
}

std::string digest(const InterferometerConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kerrmzi
