#pragma once
// YAML configuration files.
//
// Interferometer config (every section except nbs1/nbs2/splitter/coherent is optional):
//
//   nbs1:     { gain: 2.2360679775, phase: 0 }     # or g: 2 instead of gain
//   nbs2:     { g: 4, phase: pi }
//   splitter: { transmissivity: 0.25 }             # or r_over_t: 3
//   coherent: { magnitude: 10, phase: 0 }
//   phase:    { linear: 0, nonlinear: 0 }
//   loss:     { eta_a: 1, eta_b: 1, eta_c: 1, eta_d: 1, eta_det: 1 }
//
// Angles accept a number or a multiple of pi ("pi", "-pi", "pi/2", "0.5*pi").
// Sweep spec: `base:` holding an interferometer config (or `base_file:` path),
// and `axes:` listing {name, min, max, points} or {name, values: [...]}.
// Kerr medium: `medium: { n0, intensity, wavenumber, length, epsilon0, c }`.
//
// Every parse or validation error is reported as ConfigError with the line
// number and key.

#include <string>

#include "kerrmzi/model.hpp"
#include "kerrmzi/sweep.hpp"

namespace kerrmzi::io {

InterferometerConfig parse_config(const std::string& text);
InterferometerConfig load_config(const std::string& path);

KerrMediumSpec parse_medium(const std::string& text);
KerrMediumSpec load_medium(const std::string& path);

/// base_file paths resolve relative to `base_dir`.
sweep::SweepSpec parse_sweep_spec(const std::string& text, const std::string& base_dir = ".");
sweep::SweepSpec load_sweep_spec(const std::string& path);

/// YAML text that parse_config maps back to the same config.
std::string format_config(const InterferometerConfig& config);

}  // namespace kerrmzi::io
