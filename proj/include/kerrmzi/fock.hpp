#pragma once
// Three-mode truncated Fock space (slots a, b, c) with pure and mixed states.
//
// Each mode keeps levels 0..cutoff-1; basis index = (n_a * K + n_b) * K + n_c.
// Two-mode unitaries are applied block by block on their conserved quantity
// (n_i - n_j for squeezers, n_i + n_j for beam splitters). Norm that would land
// outside the retained levels is dropped and accumulated as leakage.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kerrmzi::fock {

using complex = std::complex<double>;

enum class Mode : int { a = 0, b = 1, c = 2 };

constexpr int kModes = 3;

class FockSpace {
 public:
  explicit FockSpace(int cutoff);

  int cutoff() const noexcept { return cutoff_; }
  std::size_t dim() const noexcept { return dim_; }

  std::size_t index(int na, int nb, int nc) const noexcept {
    return (static_cast<std::size_t>(na) * cutoff_ + nb) * cutoff_ + nc;
  }
  std::size_t index(const std::array<int, kModes>& n) const noexcept { return index(n[0], n[1], n[2]); }

  std::array<int, kModes> occupations(std::size_t idx) const noexcept {
    const int K = cutoff_;
    return {static_cast<int>(idx / (K * K)), static_cast<int>((idx / K) % K), static_cast<int>(idx % K)};
  }
  int occupation(std::size_t idx, Mode m) const noexcept { return occupations(idx)[static_cast<int>(m)]; }

  /// Index stride of one quantum in mode m.
  std::size_t stride(Mode m) const noexcept;

 private:
  int cutoff_;
  std::size_t dim_;
};

class FockState {
 public:
  /// Global vacuum.
  explicit FockState(int cutoff);

  const FockSpace& space() const noexcept { return space_; }
  int cutoff() const noexcept { return space_.cutoff(); }

  std::span<const complex> amplitudes() const noexcept { return amps_; }
  std::span<complex> amplitudes() noexcept { return amps_; }

  double norm2() const noexcept;

  /// Norm^2 dropped by truncation so far (including state preparation).
  double leaked() const noexcept { return leaked_; }
  void add_leakage(double w) noexcept { leaked_ += w; }

 private:
  FockSpace space_;
  std::vector<complex> amps_;
  double leaked_ = 0.0;
};

class DensityOperator {
 public:
  explicit DensityOperator(int cutoff);
  explicit DensityOperator(const FockState& pure);

  const FockSpace& space() const noexcept { return space_; }
  int cutoff() const noexcept { return space_.cutoff(); }

  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  Eigen::MatrixXcd& matrix() noexcept { return rho_; }

  double trace() const noexcept { return rho_.trace().real(); }
  double leaked() const noexcept { return leaked_; }
  void add_leakage(double w) noexcept { leaked_ += w; }

  /// max |rho - rho^dagger|
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  FockSpace space_;
  Eigen::MatrixXcd rho_;
  double leaked_ = 0.0;
};

/// Amplitudes of |alpha> on levels 0..cutoff-1, not renormalized.
std::vector<complex> coherent_amplitudes(complex alpha, int cutoff);

/// Unitary exp(xi a_i^+ a_j^+ - xi^* a_i a_j), xi = acosh(G) e^{i theta}:
/// a_i -> G a_i + g e^{i theta} a_j^+. The generator is exponentiated on a
/// Fock space padded by `padding` levels per mode; weight left in the padding
/// is reported as leakage. padding < 0 selects padding = cutoff.
FockState apply_two_mode_squeezer(FockState state, double gain, double theta, Mode i, Mode j, int padding = -1);
DensityOperator apply_two_mode_squeezer(DensityOperator rho, double gain, double theta, Mode i, Mode j,
                                        int padding = -1);

/// Heisenberg map a_i -> sqrt(T) a_i + sqrt(R) a_j, a_j -> sqrt(R) a_i - sqrt(T) a_j.
FockState apply_beam_splitter(FockState state, double transmissivity, Mode i, Mode j);
DensityOperator apply_beam_splitter(DensityOperator rho, double transmissivity, Mode i, Mode j);

/// exp(i phi_l n + i phi_n n^2) on one mode.
FockState apply_kerr(FockState state, double phi_l, double phi_n, Mode m);
DensityOperator apply_kerr(DensityOperator rho, double phi_l, double phi_n, Mode m);

/// Photon loss with transmission eta, Kraus operators
/// K_k |n> = sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k>.
DensityOperator apply_loss(DensityOperator rho, double eta, Mode m);

/// Single-mode Kraus operators of the loss channel on levels 0..cutoff-1.
std::vector<Eigen::MatrixXd> loss_kraus_operators(double eta, int cutoff);

/// max | sum_k K_k^+ K_k - 1 | on the retained levels.
double kraus_completeness_deviation(double eta, int cutoff);

struct QuadratureStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Y = -i(a - a^+); vacuum variance 1. Moments normalized by the state norm.
QuadratureStats quadrature_stats(const FockState& state, Mode m);
QuadratureStats quadrature_stats(const DensityOperator& rho, Mode m);

/// <a> normalized by the state norm.
complex mean_amplitude(const FockState& state, Mode m);
complex mean_amplitude(const DensityOperator& rho, Mode m);

/// <n^p> for one mode, normalized.
double photon_moment(const FockState& state, Mode m, int power);
double photon_moment(const DensityOperator& rho, Mode m, int power);

}  // namespace kerrmzi::fock
