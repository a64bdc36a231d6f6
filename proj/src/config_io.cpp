#include "kerrmzi/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

namespace kerrmzi::io {
namespace {

int line_of(const YAML::Node& node) { return node.Mark().line + 1; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.mark.line + 1, e.msg);
  }
}

double parse_scalar(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, line_of(node), "expected a number");
  const std::string raw = node.Scalar();
  static const std::regex pi_expr(R"(^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(raw, m, pi_expr)) {
    double factor = 1.0;
    const std::string coef = m[1].str();
    if (coef == "-") {
      factor = -1.0;
    } else if (!coef.empty() && coef != "+") {
      factor = std::stod(coef);
    }
    const double divisor = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return factor * std::numbers::pi / divisor;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < raw.size() && std::isspace(static_cast<unsigned char>(raw[used]))) ++used;
  if (used != raw.size() || raw.empty()) {
    throw ConfigError(key, line_of(node), "cannot parse '" + raw + "' as a number");
  }
  return value;
}

// A mapping section whose keys are checked against an allow-list.
class Section {
 public:
  Section(const YAML::Node& node, std::string name, std::set<std::string> allowed)
      : node_(node), name_(std::move(name)) {
    if (!node_.IsMap()) throw ConfigError(name_, line_of(node_), "expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        throw ConfigError(name_ + "." + key, line_of(kv.first), "unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  double get(const std::string& key, double fallback) const {
    return has(key) ? parse_scalar(node_[key], name_ + "." + key) : fallback;
  }

  double require(const std::string& key) const {
    if (!has(key)) throw ConfigError(name_ + "." + key, line_of(node_), "missing required key");
    return parse_scalar(node_[key], name_ + "." + key);
  }

  int line_for(const std::string& key) const { return has(key) ? line_of(node_[key]) : line_of(node_); }
  const std::string& name() const { return name_; }

 private:
  YAML::Node node_;
  std::string name_;
};

SqueezerParams read_squeezer(const Section& s) {
  if (s.has("gain") == s.has("g")) {
    throw ConfigError(s.name() + ".gain", s.line_for("gain"), "exactly one of 'gain' or 'g' is required");
  }
  const double phase = s.get("phase", 0.0);
  if (s.has("gain")) return {s.require("gain"), phase};
  const double g = s.require("g");
  if (g < 0.0) throw ConfigError(s.name() + ".g", s.line_for("g"), "g below 0");
  return SqueezerParams::from_g(g, phase);
}

// Maps a validation field name ("nbs1.gain") back to the YAML line that set it.
int line_for_field(const YAML::Node& root, const std::string& field) {
  const auto dot = field.find('.');
  if (dot == std::string::npos) return 0;
  const std::string section = field.substr(0, dot);
  std::string key = field.substr(dot + 1);
  const YAML::Node sec = root[section];
  if (!sec) return 0;
  if (sec[key]) return line_of(sec[key]);
  if (key == "gain" && sec["g"]) return line_of(sec["g"]);
  if (key == "transmissivity" && sec["r_over_t"]) return line_of(sec["r_over_t"]);
  return line_of(sec);
}

InterferometerConfig config_from_node(const YAML::Node& root, const std::string& prefix) {
  if (!root.IsMap()) throw ConfigError(prefix.empty() ? "<document>" : prefix, line_of(root), "expected a mapping");
  const std::string p = prefix.empty() ? "" : prefix + ".";
  for (const auto& kv : root) {
    static const std::set<std::string> sections = {"nbs1", "nbs2", "splitter", "coherent", "phase", "loss"};
    const std::string key = kv.first.as<std::string>();
    if (!sections.count(key)) throw ConfigError(p + key, line_of(kv.first), "unknown section");
  }
  for (const char* required : {"nbs1", "nbs2", "splitter", "coherent"}) {
    if (!root[required]) throw ConfigError(p + required, line_of(root), "missing required section");
  }

  InterferometerConfig c;
  c.nbs1 = read_squeezer(Section(root["nbs1"], p + "nbs1", {"gain", "g", "phase"}));
  c.nbs2 = read_squeezer(Section(root["nbs2"], p + "nbs2", {"gain", "g", "phase"}));

  const Section splitter(root["splitter"], p + "splitter", {"transmissivity", "r_over_t"});
  if (splitter.has("transmissivity") == splitter.has("r_over_t")) {
    throw ConfigError(p + "splitter.transmissivity", splitter.line_for("transmissivity"),
                      "exactly one of 'transmissivity' or 'r_over_t' is required");
  }
  if (splitter.has("transmissivity")) {
    c.splitter.transmissivity = splitter.require("transmissivity");
  } else {
    const double ratio = splitter.require("r_over_t");
    if (!(ratio >= 0.0)) throw ConfigError(p + "splitter.r_over_t", splitter.line_for("r_over_t"), "r_over_t below 0");
    c.splitter = SplitterParams::from_ratio(ratio);
  }

  const Section coherent(root["coherent"], p + "coherent", {"magnitude", "phase"});
  c.coherent = {coherent.require("magnitude"), coherent.get("phase", 0.0)};

  if (root["phase"]) {
    const Section phase(root["phase"], p + "phase", {"linear", "nonlinear"});
    c.phase = {phase.get("linear", 0.0), phase.get("nonlinear", 0.0)};
  }
  if (root["loss"]) {
    const Section loss(root["loss"], p + "loss", {"eta_a", "eta_b", "eta_c", "eta_d", "eta_det"});
    c.loss = {loss.get("eta_a", 1.0), loss.get("eta_b", 1.0), loss.get("eta_c", 1.0), loss.get("eta_d", 1.0),
              loss.get("eta_det", 1.0)};
  }

  const auto errors = check(c);
  if (!errors.empty()) {
    const auto& first = errors.front();
    throw ConfigError(p + first.field, line_for_field(root, first.field), first.message);
  }
  return c;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

InterferometerConfig parse_config(const std::string& text) { return config_from_node(parse_yaml(text), ""); }

InterferometerConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

KerrMediumSpec parse_medium(const std::string& text) {
  const YAML::Node root = parse_yaml(text);
  if (!root.IsMap() || !root["medium"]) throw ConfigError("medium", line_of(root), "missing required section");
  const Section s(root["medium"], "medium", {"n0", "intensity", "wavenumber", "length", "epsilon0", "c"});
  KerrMediumSpec m;
  m.n0 = s.require("n0");
  m.intensity = s.require("intensity");
  m.wavenumber = s.require("wavenumber");
  m.length = s.require("length");
  m.epsilon0 = s.get("epsilon0", m.epsilon0);
  m.c = s.get("c", m.c);
  const auto errors = check(m);
  if (!errors.empty()) {
    const std::string key = errors.front().field.substr(std::string("medium.").size());
    throw ConfigError(errors.front().field, s.line_for(key), errors.front().message);
  }
  return m;
}

KerrMediumSpec load_medium(const std::string& path) { return parse_medium(read_file(path)); }

sweep::SweepSpec parse_sweep_spec(const std::string& text, const std::string& base_dir) {
  const YAML::Node root = parse_yaml(text);
  if (!root.IsMap()) throw ConfigError("<document>", line_of(root), "expected a mapping");
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (key != "base" && key != "base_file" && key != "axes") throw ConfigError(key, line_of(kv.first), "unknown key");
  }

  sweep::SweepSpec spec;
  if (root["base"] && root["base_file"]) {
    throw ConfigError("base_file", line_of(root["base_file"]), "give either 'base' or 'base_file', not both");
  }
  if (root["base"]) {
    spec.base = config_from_node(root["base"], "base");
  } else if (root["base_file"]) {
    const auto path = std::filesystem::path(base_dir) / root["base_file"].as<std::string>();
    spec.base = load_config(path.string());
  } else {
    spec.base = sweep::figure_base();
  }

  const YAML::Node axes = root["axes"];
  if (!axes || !axes.IsSequence()) throw ConfigError("axes", line_of(axes ? axes : root), "expected a list of axes");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const std::string name = "axes[" + std::to_string(k) + "]";
    const Section s(axes[k], name, {"name", "min", "max", "points", "spacing", "values"});
    if (!axes[k]["name"]) throw ConfigError(name + ".name", line_of(axes[k]), "missing required key");
    const std::string param = axes[k]["name"].as<std::string>();
    if (!sweep::is_parameter(param)) {
      throw ConfigError(name + ".name", line_of(axes[k]["name"]), "unknown parameter '" + param + "'");
    }
    if (axes[k]["spacing"] && axes[k]["spacing"].as<std::string>() != "linear") {
      throw ConfigError(name + ".spacing", line_of(axes[k]["spacing"]), "only linear spacing is supported");
    }
    sweep::Axis axis;
    if (axes[k]["values"]) {
      const YAML::Node values = axes[k]["values"];
      if (!values.IsSequence()) throw ConfigError(name + ".values", line_of(values), "expected a list");
      axis.name = param;
      for (const auto& v : values) axis.values.push_back(parse_scalar(v, name + ".values"));
    } else {
      const double points = s.require("points");
      if (points != std::floor(points) || points < 2) {
        throw ConfigError(name + ".points", s.line_for("points"), "point count must be an integer >= 2");
      }
      axis = sweep::Axis::linear(param, s.require("min"), s.require("max"), static_cast<int>(points));
    }
    if (axis.values.size() < 2) throw ConfigError(name + ".values", line_of(axes[k]), "point count must be >= 2");
    spec.axes.push_back(std::move(axis));
  }
  try {
    sweep::validate(spec);
  } catch (const ValidationError& e) {
    throw ConfigError(e.errors().front().field, line_of(root), e.errors().front().message);
  }
  return spec;
}

sweep::SweepSpec load_sweep_spec(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_sweep_spec(read_file(path), dir.empty() ? "." : dir.string());
}

std::string format_config(const InterferometerConfig& c) {
  std::ostringstream os;
  os << "nbs1:\n  gain: " << fmt(c.nbs1.gain) << "\n  phase: " << fmt(c.nbs1.phase) << "\n";
  os << "nbs2:\n  gain: " << fmt(c.nbs2.gain) << "\n  phase: " << fmt(c.nbs2.phase) << "\n";
  os << "splitter:\n  transmissivity: " << fmt(c.splitter.transmissivity) << "\n";
  os << "coherent:\n  magnitude: " << fmt(c.coherent.magnitude) << "\n  phase: " << fmt(c.coherent.phase) << "\n";
  os << "phase:\n  linear: " << fmt(c.phase.linear) << "\n  nonlinear: " << fmt(c.phase.nonlinear) << "\n";
  os << "loss:\n  eta_a: " << fmt(c.loss.eta_a) << "\n  eta_b: " << fmt(c.loss.eta_b) << "\n  eta_c: "
     << fmt(c.loss.eta_c) << "\n  eta_d: " << fmt(c.loss.eta_d) << "\n  eta_det: " << fmt(c.loss.eta_det) << "\n";
  return os.str();
}

}  // namespace kerrmzi::io
