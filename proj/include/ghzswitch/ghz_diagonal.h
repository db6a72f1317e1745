#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ghzswitch/density_matrix.h"

namespace ghzswitch {

/// Distribution of a Pauli error X^x Z^z acting on one half of |Phi+>.
///
/// Every noise channel in the model is a Pauli channel, and a Pauli on either
/// half of |Phi+> equals (up to phase) the same Pauli on the other half, so a
/// noisy pair is fully described by four probabilities. Index = x | (z << 1).
class PairErrorModel {
 public:
  /// Perfect |Phi+>.
  PairErrorModel() : p_{1.0, 0.0, 0.0, 0.0} {}

  static PairErrorModel bell_diagonal(double f_init);
  PairErrorModel dephased(double lambda) const;
  /// Dark-count mixing: with probability 1 - alpha the qubit is replaced by 1/2.
  PairErrorModel depolarized(double alpha) const;

  double p(int x, int z) const { return p_[static_cast<std::size_t>(x | (z << 1))]; }
  double p_x_flip() const { return p(1, 0) + p(1, 1); }
  double p_z_flip() const { return p(0, 1) + p(1, 1); }

  /// Dense 4x4 state on (client, central).
  DensityMatrix to_density_matrix(QubitLabel client, QubitLabel central) const;

 private:
  std::array<double, 4> p_;
};

/// N-qubit state diagonal in the GHZ basis
///   |Psi_{s,r}> = (|0,r> + (-1)^s |1,r-bar>)/sqrt(2),
/// where r = r_2...r_N (r_2 most significant) are bit flips relative to party 1.
/// Weight index = (s << (N-1)) | r.
class GhzDiagonalState {
 public:
  GhzDiagonalState() = default;
  GhzDiagonalState(std::size_t parties, std::vector<double> weights);

  /// Exact output of merging the given pairs (party order = vector order).
  static GhzDiagonalState from_pairs(const std::vector<PairErrorModel>& pairs);

  /// Projects a dense state onto the GHZ basis; throws std::runtime_error if
  /// the state has weight off the GHZ-diagonal beyond `tol`.
  static GhzDiagonalState from_density_matrix(const DensityMatrix& rho, double tol = 1e-9);

  std::size_t parties() const { return parties_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int s, std::size_t r) const { return weights_[(static_cast<std::size_t>(s) << (parties_ - 1)) | r]; }

  double expect_x_parity() const;
  /// <Z_1 Z_i> for party i in [2, N].
  double expect_zz(std::size_t party) const;
  double fidelity() const { return weights_.empty() ? 0.0 : weights_[0]; }

  DensityMatrix to_density_matrix(const std::vector<QubitLabel>& labels) const;
  DensityMatrix to_density_matrix() const;

  GhzDiagonalState& operator+=(const GhzDiagonalState& other);
  GhzDiagonalState scaled(double factor) const;

 private:
  std::size_t parties_ = 0;
  std::vector<double> weights_;
};

std::vector<QubitLabel> client_labels(std::size_t parties);

}  // namespace ghzswitch
