#include "kerrmzi/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

namespace kerrmzi::fock {
namespace {

// One invariant subspace of a two-mode unitary: a chain of (n_i, n_j) sites,
// possibly extending beyond the cutoff, and the unitary restricted to it.
struct ChainBlock {
  std::vector<std::array<int, 2>> sites;
  Eigen::MatrixXcd u;
};

int mode_index(Mode m) { return static_cast<int>(m); }

Mode spectator(Mode i, Mode j) {
  if (i == j) throw std::invalid_argument("two-mode operation needs distinct modes");
  return static_cast<Mode>(3 - mode_index(i) - mode_index(j));
}

std::vector<ChainBlock> squeezer_blocks(double gain, double theta, int cutoff, int padding) {
  const int padded = cutoff + padding;
  const double r = std::acosh(gain);
  std::vector<ChainBlock> blocks;
  for (int diff = -(cutoff - 1); diff <= cutoff - 1; ++diff) {
    ChainBlock block;
    for (int k = 0;; ++k) {
      const int ni = k + std::max(diff, 0);
      const int nj = k + std::max(-diff, 0);
      if (ni >= padded || nj >= padded) break;
      block.sites.push_back({ni, nj});
    }
    const auto m = static_cast<Eigen::Index>(block.sites.size());
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index s = 0; s + 1 < m; ++s) {
      const double w = std::sqrt((block.sites[s][0] + 1.0) * (block.sites[s][1] + 1.0));
      gen(s + 1, s) = w;
      gen(s, s + 1) = -w;
    }
    const Eigen::MatrixXd rot = (r * gen).exp();
    block.u.resize(m, m);
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = 0; q < m; ++q) {
        block.u(p, q) = std::polar(rot(p, q), static_cast<double>(p - q) * theta);
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<ChainBlock> beam_splitter_blocks(double transmissivity, int cutoff) {
  const double angle = std::atan2(std::sqrt(1.0 - transmissivity), std::sqrt(transmissivity));
  std::vector<ChainBlock> blocks;
  for (int total = 0; total <= 2 * (cutoff - 1); ++total) {
    ChainBlock block;
    for (int p = 0; p <= total; ++p) block.sites.push_back({p, total - p});
    const Eigen::Index m = total + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index p = 0; p + 1 < m; ++p) {
      const double w = std::sqrt((p + 1.0) * (total - p));
      gen(p + 1, p) = w;
      gen(p, p + 1) = -w;
    }
    // Rotation a_i -> sqrt(T) a_i + sqrt(R) a_j, then a pi phase on mode j.
    Eigen::MatrixXd rot = (angle * gen).exp();
    for (Eigen::Index p = 0; p < m; ++p) {
      if ((total - p) % 2) rot.row(p) *= -1.0;
    }
    block.u = rot.cast<complex>();
    blocks.push_back(std::move(block));
  }
  return blocks;
}

// Applies the block unitary on modes (i, j) to a state vector; returns dropped norm^2.
double apply_blocks(std::span<complex> psi, const FockSpace& space, Mode i, Mode j,
                    const std::vector<ChainBlock>& blocks) {
  const int K = space.cutoff();
  const Mode k = spectator(i, j);
  double leaked = 0.0;
  Eigen::VectorXcd x, y;
  std::array<int, kModes> n{};
  for (int nk = 0; nk < K; ++nk) {
    n[mode_index(k)] = nk;
    for (const ChainBlock& block : blocks) {
      const auto m = static_cast<Eigen::Index>(block.sites.size());
      x.setZero(m);
      bool any = false;
      for (Eigen::Index s = 0; s < m; ++s) {
        const auto [ni, nj] = block.sites[s];
        if (ni < K && nj < K) {
          n[mode_index(i)] = ni;
          n[mode_index(j)] = nj;
          x[s] = psi[space.index(n)];
          any = any || x[s] != complex{};
        }
      }
      if (!any) continue;
      y.noalias() = block.u * x;
      for (Eigen::Index s = 0; s < m; ++s) {
        const auto [ni, nj] = block.sites[s];
        if (ni < K && nj < K) {
          n[mode_index(i)] = ni;
          n[mode_index(j)] = nj;
          psi[space.index(n)] = y[s];
        } else {
          leaked += std::norm(y[s]);
        }
      }
    }
  }
  return leaked;
}

// rho -> U rho U^dagger for a vector map U applied column by column.
template <class VectorMap>
void conjugate(DensityOperator& rho, VectorMap&& apply) {
  const double before = rho.trace();
  Eigen::MatrixXcd& m = rho.matrix();
  const auto dim = static_cast<std::size_t>(m.rows());
  for (Eigen::Index col = 0; col < m.cols(); ++col) apply(std::span<complex>(m.col(col).data(), dim));
  m = m.adjoint().eval();
  for (Eigen::Index col = 0; col < m.cols(); ++col) apply(std::span<complex>(m.col(col).data(), dim));
  rho.add_leakage(std::max(0.0, before - rho.trace()));
}

int resolve_padding(int padding, int cutoff) { return padding < 0 ? cutoff : padding; }

void check_gain(double gain) {
  if (!(gain >= 1.0)) throw std::invalid_argument("squeezer gain must be >= 1");
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

// sqrt(C(n,k) eta^(n-k) (1-eta)^k)
double kraus_element(int n, int k, double eta) {
  return std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
}

}  // namespace

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 2) throw std::invalid_argument("Fock cutoff must be >= 2");
  dim_ = static_cast<std::size_t>(cutoff) * cutoff * cutoff;
}

std::size_t FockSpace::stride(Mode m) const noexcept {
  switch (m) {
    case Mode::a: return static_cast<std::size_t>(cutoff_) * cutoff_;
    case Mode::b: return static_cast<std::size_t>(cutoff_);
    case Mode::c: return 1;
  }
  return 1;
}

FockState::FockState(int cutoff) : space_(cutoff), amps_(space_.dim()) { amps_[0] = 1.0; }

double FockState::norm2() const noexcept {
  double s = 0.0;
  for (const complex& z : amps_) s += std::norm(z);
  return s;
}

DensityOperator::DensityOperator(int cutoff)
    : space_(cutoff), rho_(Eigen::MatrixXcd::Zero(space_.dim(), space_.dim())) {
  rho_(0, 0) = 1.0;
}

DensityOperator::DensityOperator(const FockState& pure) : space_(pure.cutoff()), leaked_(pure.leaked()) {
  const auto amps = pure.amplitudes();
  const Eigen::Map<const Eigen::VectorXcd> psi(amps.data(), static_cast<Eigen::Index>(amps.size()));
  rho_ = psi * psi.adjoint();
}

double DensityOperator::hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<complex> coherent_amplitudes(complex alpha, int cutoff) {
  std::vector<complex> c(static_cast<std::size_t>(cutoff));
  c[0] = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n < cutoff; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

FockState apply_two_mode_squeezer(FockState state, double gain, double theta, Mode i, Mode j, int padding) {
  check_gain(gain);
  if (gain == 1.0) return state;
  const auto blocks = squeezer_blocks(gain, theta, state.cutoff(), resolve_padding(padding, state.cutoff()));
  state.add_leakage(apply_blocks(state.amplitudes(), state.space(), i, j, blocks));
  return state;
}

DensityOperator apply_two_mode_squeezer(DensityOperator rho, double gain, double theta, Mode i, Mode j,
                                        int padding) {
  check_gain(gain);
  if (gain == 1.0) return rho;
  const auto blocks = squeezer_blocks(gain, theta, rho.cutoff(), resolve_padding(padding, rho.cutoff()));
  const FockSpace space = rho.space();
  conjugate(rho, [&](std::span<complex> v) { apply_blocks(v, space, i, j, blocks); });
  return rho;
}

FockState apply_beam_splitter(FockState state, double transmissivity, Mode i, Mode j) {
  check_unit(transmissivity, "transmissivity");
  const auto blocks = beam_splitter_blocks(transmissivity, state.cutoff());
  state.add_leakage(apply_blocks(state.amplitudes(), state.space(), i, j, blocks));
  return state;
}

DensityOperator apply_beam_splitter(DensityOperator rho, double transmissivity, Mode i, Mode j) {
  check_unit(transmissivity, "transmissivity");
  const auto blocks = beam_splitter_blocks(transmissivity, rho.cutoff());
  const FockSpace space = rho.space();
  conjugate(rho, [&](std::span<complex> v) { apply_blocks(v, space, i, j, blocks); });
  return rho;
}

namespace {

std::vector<complex> kerr_phases(double phi_l, double phi_n, int cutoff) {
  std::vector<complex> ph(static_cast<std::size_t>(cutoff));
  for (int n = 0; n < cutoff; ++n) ph[n] = std::polar(1.0, phi_l * n + phi_n * n * static_cast<double>(n));
  return ph;
}

}  // namespace

FockState apply_kerr(FockState state, double phi_l, double phi_n, Mode m) {
  const auto ph = kerr_phases(phi_l, phi_n, state.cutoff());
  const FockSpace& space = state.space();
  auto amps = state.amplitudes();
  for (std::size_t idx = 0; idx < amps.size(); ++idx) amps[idx] *= ph[space.occupation(idx, m)];
  return state;
}

DensityOperator apply_kerr(DensityOperator rho, double phi_l, double phi_n, Mode m) {
  const auto ph = kerr_phases(phi_l, phi_n, rho.cutoff());
  const FockSpace& space = rho.space();
  Eigen::MatrixXcd& mat = rho.matrix();
  for (Eigen::Index col = 0; col < mat.cols(); ++col) {
    const complex right = std::conj(ph[space.occupation(col, m)]);
    for (Eigen::Index row = 0; row < mat.rows(); ++row) mat(row, col) *= ph[space.occupation(row, m)] * right;
  }
  return rho;
}

DensityOperator apply_loss(DensityOperator rho, double eta, Mode m) {
  check_unit(eta, "loss transmission");
  if (eta == 1.0) return rho;
  const FockSpace& space = rho.space();
  const int K = space.cutoff();
  const auto step = static_cast<Eigen::Index>(space.stride(m));

  // kraus[k][n] = <n-k|K_k|n>
  std::vector<std::vector<double>> kraus(K, std::vector<double>(K, 0.0));
  for (int n = 0; n < K; ++n)
    for (int k = 0; k <= n; ++k) kraus[k][n] = kraus_element(n, k, eta);

  const Eigen::MatrixXcd& in = rho.matrix();
  const auto dim = static_cast<Eigen::Index>(space.dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int nc = space.occupation(col, m);
    for (Eigen::Index row = 0; row < dim; ++row) {
      const int nr = space.occupation(row, m);
      complex acc{};
      for (int k = 0; nr + k < K && nc + k < K; ++k) {
        acc += kraus[k][nr + k] * kraus[k][nc + k] * in(row + k * step, col + k * step);
      }
      out(row, col) = acc;
    }
  }
  rho.matrix() = std::move(out);
  return rho;
}

std::vector<Eigen::MatrixXd> loss_kraus_operators(double eta, int cutoff) {
  check_unit(eta, "loss transmission");
  std::vector<Eigen::MatrixXd> ops;
  for (int k = 0; k < cutoff; ++k) {
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int n = k; n < cutoff; ++n) op(n - k, n) = kraus_element(n, k, eta);
    ops.push_back(std::move(op));
  }
  return ops;
}

double kraus_completeness_deviation(double eta, int cutoff) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(cutoff, cutoff);
  for (const auto& op : loss_kraus_operators(eta, cutoff)) sum += op.transpose() * op;
  return (sum - Eigen::MatrixXd::Identity(cutoff, cutoff)).cwiseAbs().maxCoeff();
}

namespace {

struct RawMoments {
  complex a;   // <a>
  complex a2;  // <a^2>
  double n = 0.0;
  double weight = 0.0;
};

RawMoments raw_moments(const FockState& state, Mode m) {
  const FockSpace& space = state.space();
  const auto psi = state.amplitudes();
  const std::size_t step = space.stride(m);
  RawMoments out;
  for (std::size_t idx = 0; idx < psi.size(); ++idx) {
    const int n = space.occupation(idx, m);
    const double p = std::norm(psi[idx]);
    out.weight += p;
    out.n += n * p;
    if (n >= 1) out.a += std::conj(psi[idx - step]) * std::sqrt(static_cast<double>(n)) * psi[idx];
    if (n >= 2) out.a2 += std::conj(psi[idx - 2 * step]) * std::sqrt(n * (n - 1.0)) * psi[idx];
  }
  return out;
}

RawMoments raw_moments(const DensityOperator& rho, Mode m) {
  const FockSpace& space = rho.space();
  const Eigen::MatrixXcd& mat = rho.matrix();
  const auto step = static_cast<Eigen::Index>(space.stride(m));
  RawMoments out;
  for (Eigen::Index idx = 0; idx < mat.rows(); ++idx) {
    const int n = space.occupation(idx, m);
    const double p = mat(idx, idx).real();
    out.weight += p;
    out.n += n * p;
    if (n >= 1) out.a += mat(idx, idx - step) * std::sqrt(static_cast<double>(n));
    if (n >= 2) out.a2 += mat(idx, idx - 2 * step) * std::sqrt(n * (n - 1.0));
  }
  return out;
}

QuadratureStats stats_from(const RawMoments& raw) {
  const complex a = raw.a / raw.weight;
  const complex a2 = raw.a2 / raw.weight;
  const double n = raw.n / raw.weight;
  // <Y> = 2 Im<a>;  <Y^2> = 2<n> + 1 - 2 Re<a^2>
  const double mean = 2.0 * a.imag();
  return {mean, 2.0 * n + 1.0 - 2.0 * a2.real() - mean * mean};
}

template <class State>
double moment_impl(const State& state, Mode m, int power) {
  const FockSpace& space = state.space();
  double num = 0.0, den = 0.0;
  for (std::size_t idx = 0; idx < space.dim(); ++idx) {
    double p;
    if constexpr (std::is_same_v<State, FockState>) {
      p = std::norm(state.amplitudes()[idx]);
    } else {
      p = state.matrix()(idx, idx).real();
    }
    num += std::pow(static_cast<double>(space.occupation(idx, m)), power) * p;
    den += p;
  }
  return num / den;
}

}  // namespace

QuadratureStats quadrature_stats(const FockState& state, Mode m) { return stats_from(raw_moments(state, m)); }
QuadratureStats quadrature_stats(const DensityOperator& rho, Mode m) { return stats_from(raw_moments(rho, m)); }

complex mean_amplitude(const FockState& state, Mode m) {
  const auto raw = raw_moments(state, m);
  return raw.a / raw.weight;
}
complex mean_amplitude(const DensityOperator& rho, Mode m) {
  const auto raw = raw_moments(rho, m);
  return raw.a / raw.weight;
}

double photon_moment(const FockState& state, Mode m, int power) { return moment_impl(state, m, power); }
double photon_moment(const DensityOperator& rho, Mode m, int power) { return moment_impl(rho, m, power); }

}  // namespace kerrmzi::fock
