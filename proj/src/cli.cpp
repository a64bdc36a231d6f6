#include "kerrmzi/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "kerrmzi/analytic.hpp"
#include "kerrmzi/config_io.hpp"
#include "kerrmzi/errors.hpp"
#include "kerrmzi/report_io.hpp"
#include "kerrmzi/sweep.hpp"
#include "kerrmzi/verify.hpp"

namespace kerrmzi::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised for bad flags or inputs that CLI11 cannot catch itself.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string preset;
  std::string kind;
  std::string spec;
  std::string suite = "all";
  std::string mutate = "none";
  std::string medium;
  std::string param;
  std::uint64_t seed = 1;
  int cutoff = 15;
  int repeats = 1;
  unsigned threads = 0;
  double delta_phi = 0.0;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes next to the target and renames, so a failed run leaves nothing behind.
void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw InputError("cannot write " + tmp.string());
    f << content;
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw InputError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputError("cannot rename onto " + target.string());
  }
}

void emit(const Options& o, const std::string& content, std::ostream& out) {
  if (o.out.empty()) {
    out << content;
  } else {
    write_atomic(o.out, content);
  }
}

void write_manifest(const std::string& command, const std::string& digest_text, const std::string& output) {
  json m;
  m["command"] = command;
  m["config_digest"] = digest_text;
  m["version"] = KERRMZI_VERSION;
  m["timestamp"] = timestamp();
  m["outputs"] = json::array({fs::path(output).filename().string()});
  write_atomic(output + ".manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------- report

int cmd_report(const Options& o, std::ostream& out) {
  const auto config = io::load_config(o.config);
  const auto report = analytic::sensitivity(config, o.repeats);
  const std::string fmt = o.format.empty() ? "json" : o.format;
  if (fmt == "json") {
    emit(o, io::report_json(report, config), out);
  } else if (fmt == "csv") {
    emit(o, io::report_csv(report, config), out);
  } else if (fmt == "text") {
    emit(o, io::report_text(report), out);
  } else {
    throw InputError("unknown format '" + fmt + "' (json, csv, text)");
  }
  return ok;
}

// ---------------------------------------------------------------- sweep

std::vector<std::string> kind_parameters(const std::string& kind) {
  if (kind == "gain") return {"g1", "g2", "g2_over_g1", "gain1", "gain2", "r_over_t"};
  if (kind == "internal-loss") return {"eta_c", "eta_d", "eta_cd"};
  if (kind == "external-loss") return {"eta_a", "eta_b", "eta_ab"};
  if (kind == "split") return {"transmissivity", "r_over_t"};
  throw InputError("unknown sweep kind '" + kind + "' (gain, internal-loss, external-loss, split)");
}

sweep::SweepSpec kind_default(const std::string& kind, const InterferometerConfig& base) {
  using sweep::Axis;
  if (kind == "gain") {
    auto spec = *sweep::preset("fig2");
    spec.base = base;
    return spec;
  }
  if (kind == "internal-loss") return {base, {Axis::linear("eta_c", 0.05, 1.0, 20), Axis::linear("eta_d", 0.05, 1.0, 20)}};
  if (kind == "external-loss") return {base, {Axis::linear("eta_a", 0.05, 1.0, 20), Axis::linear("eta_b", 0.05, 1.0, 20)}};
  return {base, {Axis::linear("transmissivity", 0.02, 0.98, 49)}};
}

std::string sweep_json(const sweep::SweepResult& r) {
  auto num = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j;
    for (std::size_t k = 0; k < r.axis_names.size(); ++k) j[r.axis_names[k]] = row.axis_values[k];
    j["delta_phi"] = num(row.delta_phi);
    j["sql"] = num(row.sql);
    j["qcrb"] = num(row.qcrb);
    j["beats_sql"] = row.beats_sql;
    j["defined"] = row.defined;
    rows.push_back(std::move(j));
  }
  return rows.dump(2) + "\n";
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const int sources = !o.preset.empty() + !o.spec.empty();
  if (sources > 1) throw InputError("--preset and --spec are mutually exclusive");
  if (sources == 0 && o.kind.empty()) throw InputError("sweep needs --preset, --spec or --kind");

  sweep::SweepSpec spec;
  std::string source;
  if (!o.preset.empty()) {
    auto p = sweep::preset(o.preset);
    if (!p) throw InputError("unknown preset '" + o.preset + "' (fig2, fig4a, fig4b)");
    spec = *p;
    if (!o.config.empty()) spec.base = io::load_config(o.config);
    source = "preset " + o.preset;
  } else if (!o.spec.empty()) {
    spec = io::load_sweep_spec(o.spec);
    source = "spec " + o.spec;
  } else {
    const auto base = o.config.empty() ? sweep::figure_base() : io::load_config(o.config);
    spec = kind_default(o.kind, base);
    source = "kind " + o.kind;
  }
  if (!o.kind.empty()) {
    const auto allowed = kind_parameters(o.kind);
    for (const auto& axis : spec.axes) {
      if (std::find(allowed.begin(), allowed.end(), axis.name) == allowed.end()) {
        throw InputError("axis '" + axis.name + "' does not belong to sweep kind '" + o.kind + "'");
      }
    }
  }

  const auto result = sweep::run_sweep(spec, o.threads);
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  std::string content;
  if (fmt == "csv") {
    std::ostringstream os;
    sweep::write_csv(os, result);
    content = os.str();
  } else if (fmt == "json") {
    content = sweep_json(result);
  } else {
    throw InputError("unknown format '" + fmt + "' (csv, json)");
  }
  emit(o, content, out);
  if (!o.out.empty()) write_manifest("sweep " + source, digest(spec.base), o.out);
  return ok;
}

// ---------------------------------------------------------------- threshold

int cmd_threshold(const Options& o, std::ostream& out) {
  const auto base = o.config.empty() ? sweep::figure_base() : io::load_config(o.config);
  if (o.param.empty()) throw InputError("threshold needs --param");
  const auto t = sweep::find_sql_threshold(base, o.param);
  json j;
  j["config_digest"] = digest(base);
  j["parameter"] = o.param;
  j["found"] = t.found;
  if (t.found) {
    j["eta"] = t.eta;
    j["residual"] = t.residual;
  } else {
    j["eta"] = nullptr;
    j["reason"] = t.reason;
  }
  j["iterations"] = t.iterations;
  emit(o, j.dump(2) + "\n", out);
  return t.found ? ok : undefined_result;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto suite = verify::parse_suite(o.suite);
  if (!suite) throw InputError("unknown suite '" + o.suite + "' (analytic, oracle, all)");
  const auto mutation = verify::parse_mutation(o.mutate);
  if (!mutation) throw InputError("unknown mutation '" + o.mutate + "' (none, slope-coefficient, noise-cross-term, qfi-s2)");
  if (o.cutoff < 2) throw InputError("--cutoff must be at least 2");

  verify::SuiteOptions options;
  options.seed = o.seed;
  options.cutoff = o.cutoff;
  options.mutation = *mutation;
  const auto records = verify::run_suite(*suite, options);

  int failed = 0;
  for (const auto& r : records) {
    if (r.passed) continue;
    ++failed;
    err << "FAIL " << r.check << " (relative error " << r.relative_error << ", tolerance " << r.tolerance
        << (r.converged ? "" : ", not converged") << ") " << r.detail << "\n";
  }
  if (o.out.empty()) {
    out << verify::records_json(records);
  } else {
    write_atomic(o.out, verify::records_json(records));
    out << records.size() - failed << "/" << records.size() << " checks passed\n";
  }
  return failed ? verification_failed : ok;
}

// ---------------------------------------------------------------- chi3

int cmd_chi3(const Options& o, std::ostream& out) {
  const auto medium = io::load_medium(o.medium);
  const double coefficient = analytic::chi3_phase_coefficient(medium);
  const double delta_chi3 = analytic::chi3_uncertainty(medium, o.delta_phi);
  const std::string fmt = o.format.empty() ? "text" : o.format;
  if (fmt == "json") {
    json j;
    j["delta_phi_n"] = o.delta_phi;
    j["delta_chi3"] = delta_chi3;
    j["phase_per_chi3"] = coefficient;
    j["chi3_per_phase"] = 1.0 / coefficient;
    emit(o, j.dump(2) + "\n", out);
  } else if (fmt == "text") {
    char buf[256];
    std::snprintf(buf, sizeof buf, "delta_chi3 = %.17g\nphi_n = %.17g * chi3\n", delta_chi3, coefficient);
    emit(o, buf, out);
  } else {
    throw InputError("unknown format '" + fmt + "' (text, json)");
  }
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kerr-nonlinear interferometer sensitivity tool", "kerrmzi"};
  app.set_version_flag("--version", std::string(KERRMZI_VERSION));
  app.require_subcommand(1);
  Options o;

  auto* report = app.add_subcommand("report", "Sensitivity report for one configuration");
  report->add_option("--config", o.config, "YAML configuration")->required();
  report->add_option("--format", o.format, "json (default), csv or text");
  report->add_option("--out", o.out, "Output file (default stdout)");
  report->add_option("--repeats", o.repeats, "Repetitions m in the QCRB")->check(CLI::PositiveNumber);

  auto* sw = app.add_subcommand("sweep", "Parameter sweep of the sensitivity");
  sw->add_option("--preset", o.preset, "fig2, fig4a or fig4b");
  sw->add_option("--spec", o.spec, "YAML sweep specification");
  sw->add_option("--kind", o.kind, "gain, internal-loss, external-loss or split");
  sw->add_option("--config", o.config, "Base configuration for --preset or --kind");
  sw->add_option("--format", o.format, "csv (default) or json");
  sw->add_option("--out", o.out, "Output file; a manifest is written beside it");
  sw->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* th = app.add_subcommand("threshold", "Loss efficiency at which the sensitivity meets the SQL");
  th->add_option("--config", o.config, "Base configuration (default: figure base)");
  th->add_option("--param", o.param, "eta_a, eta_b, eta_c, eta_d, eta_det, eta_ab or eta_cd")->required();
  th->add_option("--out", o.out, "Output file (default stdout)");

  auto* ver = app.add_subcommand("verify", "Run the verification suites");
  ver->add_option("--suite", o.suite, "analytic, oracle or all");
  ver->add_option("--seed", o.seed, "Seed for randomized checks");
  ver->add_option("--cutoff", o.cutoff, "Starting Fock cutoff for oracle checks");
  ver->add_option("--out", o.out, "JSON records file (default stdout)");
  ver->add_option("--mutate", o.mutate, "Inject a wrong coefficient: slope-coefficient, noise-cross-term, qfi-s2");

  auto* chi = app.add_subcommand("chi3", "Convert a nonlinear phase uncertainty into a chi3 uncertainty");
  chi->add_option("--medium", o.medium, "YAML medium description")->required();
  chi->add_option("--delta-phi", o.delta_phi, "Nonlinear phase uncertainty")->required();
  chi->add_option("--format", o.format, "text (default) or json");
  chi->add_option("--out", o.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }

  try {
    if (*report) return cmd_report(o, out);
    if (*sw) return cmd_sweep(o, out);
    if (*th) return cmd_threshold(o, out);
    if (*ver) return cmd_verify(o, out, err);
    return cmd_chi3(o, out);
  } catch (const UndefinedSensitivity& e) {
    err << "error: " << e.what() << "\n";
    return undefined_result;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
}

}  // namespace kerrmzi::cli
