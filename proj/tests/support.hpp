#pragma once
// Seeded generators for the property tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "kerrmzi/model.hpp"

namespace kt {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  kerrmzi::InterferometerConfig config(double g_max = 5.0, double alpha_max = 10.0) {
    kerrmzi::InterferometerConfig c;
    c.nbs1 = kerrmzi::SqueezerParams::from_g(uniform(0.0, g_max), angle());
    c.nbs2 = kerrmzi::SqueezerParams::from_g(uniform(0.0, g_max), angle());
    c.splitter.transmissivity = uniform(0.0, 1.0);
    c.coherent = {uniform(0.0, alpha_max), angle()};
    return c;
  }

  kerrmzi::InterferometerConfig lossy_config(double g_max = 5.0) {
    auto c = config(g_max);
    c.loss.eta_a = uniform(0.01, 1.0);
    c.loss.eta_b = uniform(0.01, 1.0);
    c.loss.eta_c = uniform(0.01, 1.0);
    c.loss.eta_d = uniform(0.01, 1.0);
    c.loss.eta_det = uniform(0.01, 1.0);
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

inline double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

// |alpha| = 10, g1 = 2, g2 = 4, T = 0.25, theta_2 = pi.
inline kerrmzi::InterferometerConfig figure_config() {
  kerrmzi::InterferometerConfig c;
  c.nbs1 = kerrmzi::SqueezerParams::from_g(2.0, 0.0);
  c.nbs2 = kerrmzi::SqueezerParams::from_g(4.0, std::numbers::pi);
  c.splitter.transmissivity = 0.25;
  c.coherent = {10.0, 0.0};
  return c;
}

}  // namespace kt
