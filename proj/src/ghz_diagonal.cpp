#include "ghzswitch/ghz_diagonal.h"

#include <cmath>
#include <stdexcept>

namespace ghzswitch {

PairErrorModel PairErrorModel::bell_diagonal(double f_init) {
  if (!(f_init >= 0.25 && f_init <= 1.0)) {
    throw std::invalid_argument("bell_diagonal: F_init must lie in [0.25, 1]");
  }
  PairErrorModel m;
  const double rest = (1.0 - f_init) / 3.0;
  m.p_ = {f_init, rest, rest, rest};
  return m;
}

PairErrorModel PairErrorModel::dephased(double lambda) const {
  PairErrorModel m;
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      m.p_[static_cast<std::size_t>(x | (z << 1))] = (1.0 - lambda) * p(x, z) + lambda * p(x, z ^ 1);
    }
  }
  return m;
}

PairErrorModel PairErrorModel::depolarized(double alpha) const {
  PairErrorModel m;
  for (std::size_t i = 0; i < 4; ++i) m.p_[i] = alpha * p_[i] + (1.0 - alpha) * 0.25;
  return m;
}

DensityMatrix PairErrorModel::to_density_matrix(QubitLabel client, QubitLabel central) const {
  const DensityMatrix phi = DensityMatrix::ghz({client, central});
  Matrix sum = Matrix::Zero(4, 4);
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) {
      DensityMatrix term = phi;
      if (z) term = conjugate_pauli(term, client, Pauli::kZ);
      if (x) term = conjugate_pauli(term, client, Pauli::kX);
      sum += p(x, z) * term.entries();
    }
  }
  return DensityMatrix(std::move(sum), {client, central});
}

GhzDiagonalState::GhzDiagonalState(std::size_t parties, std::vector<double> weights)
    : parties_(parties), weights_(std::move(weights)) {
  if (parties_ < 2) throw std::invalid_argument("GHZ-diagonal state needs at least two parties");
  if (weights_.size() != (std::size_t{1} << parties_)) {
    throw std::invalid_argument("GHZ-diagonal weight vector has wrong length");
  }
}

GhzDiagonalState GhzDiagonalState::from_pairs(const std::vector<PairErrorModel>& pairs) {
  const std::size_t n = pairs.size();
  if (n < 2) throw std::invalid_argument("from_pairs: need at least two pairs");

  // dp[(x1 * 2 + s) * width + r]: joint weight of party-1 flip, phase parity and relative flips.
  std::size_t width = 1;
  std::vector<double> dp(4, 0.0);
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) dp[static_cast<std::size_t>(x * 2 + z)] = pairs[0].p(x, z);
  }
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(4 * width * 2, 0.0);
    for (std::size_t x1 = 0; x1 < 2; ++x1) {
      for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t r = 0; r < width; ++r) {
          const double w = dp[(x1 * 2 + s) * width + r];
          if (w == 0.0) continue;
          for (int x = 0; x < 2; ++x) {
            for (int z = 0; z < 2; ++z) {
              const std::size_t ns = s ^ static_cast<std::size_t>(z);
              const std::size_t nr = (r << 1) | (x1 ^ static_cast<std::size_t>(x));
              next[(x1 * 2 + ns) * (width * 2) + nr] += w * pairs[k].p(x, z);
            }
          }
        }
      }
    }
    dp = std::move(next);
    width *= 2;
  }
  std::vector<double> weights(2 * width, 0.0);
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t r = 0; r < width; ++r) weights[s * width + r] += dp[(x1 * 2 + s) * width + r];
    }
  }
  return GhzDiagonalState(n, std::move(weights));
}

GhzDiagonalState GhzDiagonalState::from_density_matrix(const DensityMatrix& rho, double tol) {
  const std::size_t n = rho.num_qubits();
  const std::size_t width = std::size_t{1} << (n - 1);
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> weights(2 * width);
  for (std::size_t r = 0; r < width; ++r) {
    const std::size_t v0 = r, v1 = full ^ r;
    const double diag = (rho(v0, v0) + rho(v1, v1)).real();
    const double coh = (rho(v0, v1) + rho(v1, v0)).real();
    weights[r] = 0.5 * (diag + coh);
    weights[width + r] = 0.5 * (diag - coh);
  }
  GhzDiagonalState state(n, std::move(weights));
  const double err = rho.max_abs_diff(state.to_density_matrix(rho.labels()));
  if (err > tol) {
    throw std::runtime_error("state is not GHZ-diagonal (residual " + std::to_string(err) + ")");
  }
  return state;
}

double GhzDiagonalState::expect_x_parity() const {
  const std::size_t width = weights_.size() / 2;
  double v = 0.0;
  for (std::size_t r = 0; r < width; ++r) v += weights_[r] - weights_[width + r];
  return v;
}

double GhzDiagonalState::expect_zz(std::size_t party) const {
  if (party < 2 || party > parties_) throw std::out_of_range("expect_zz: party index out of range");
  const std::size_t bit = std::size_t{1} << (parties_ - party);
  double v = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) v += (i & bit) ? -weights_[i] : weights_[i];
  return v;
}

DensityMatrix GhzDiagonalState::to_density_matrix(const std::vector<QubitLabel>& labels) const {
  if (labels.size() != parties_) throw std::invalid_argument("label count does not match party count");
  const std::size_t width = weights_.size() / 2;
  const std::size_t full = weights_.size() - 1;
  const auto d = static_cast<Eigen::Index>(weights_.size());
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t r = 0; r < width; ++r) {
    const auto v0 = static_cast<Eigen::Index>(r), v1 = static_cast<Eigen::Index>(full ^ r);
    const double plus = weights_[r], minus = weights_[width + r];
    m(v0, v0) += 0.5 * (plus + minus);
    m(v1, v1) += 0.5 * (plus + minus);
    m(v0, v1) += 0.5 * (plus - minus);
    m(v1, v0) += 0.5 * (plus - minus);
  }
  return DensityMatrix(std::move(m), labels);
}

DensityMatrix GhzDiagonalState::to_density_matrix() const { return to_density_matrix(client_labels(parties_)); }

GhzDiagonalState& GhzDiagonalState::operator+=(const GhzDiagonalState& other) {
  if (parties_ == 0) {
    *this = other;
    return *this;
  }
  if (other.parties_ != parties_) throw std::invalid_argument("cannot add GHZ states of different size");
  for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += other.weights_[i];
  return *this;
}

GhzDiagonalState GhzDiagonalState::scaled(double factor) const {
  GhzDiagonalState out = *this;
  for (double& w : out.weights_) w *= factor;
  return out;
}

std::vector<QubitLabel> client_labels(std::size_t parties) {
  std::vector<QubitLabel> labels;
  for (std::size_t k = 1; k <= parties; ++k) labels.push_back(QubitLabel::client(static_cast<int>(k)));
  return labels;
}

}  // namespace ghzswitch
