#include "ghzswitch/keyrate.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ghzswitch {

namespace {

double qber_from_expectation(double e) { return std::clamp(0.5 * (1.0 - e), 0.0, 1.0); }

}  // namespace

std::size_t RunStatistics::q_z_argmax() const {
  if (q_z.empty()) throw std::logic_error("RunStatistics has no pairwise QBERs");
  // ranked by entropy: a QBER above 1/2 is as harmful as its mirror image
  std::size_t best = 0;
  for (std::size_t i = 1; i < q_z.size(); ++i) {
    if (binary_entropy(q_z[i]) > binary_entropy(q_z[best])) best = i;
  }
  return best;
}

double qber_x(const DensityMatrix& rho) {
  PauliString all_x;
  for (const auto& label : rho.labels()) all_x[label] = Pauli::kX;
  return qber_from_expectation(expect_pauli(rho, all_x));
}

double qber_z(const DensityMatrix& rho, std::size_t party) {
  if (party < 2 || party > rho.num_qubits()) throw std::out_of_range("qber_z: party index out of range");
  const PauliString zz{{rho.labels()[0], Pauli::kZ}, {rho.labels()[party - 1], Pauli::kZ}};
  return qber_from_expectation(expect_pauli(rho, zz));
}

double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binary_entropy: q must lie in [0, 1]");
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

KeyRate cka_rate(double yield, double q_x, const std::vector<double>& q_z) {
  if (q_z.empty()) throw std::invalid_argument("cka_rate: need at least one pairwise QBER");
  if (!(yield >= 0.0)) throw std::invalid_argument("cka_rate: yield must be >= 0");
  double worst = 0.0;
  for (double q : q_z) worst = std::max(worst, binary_entropy(q));
  KeyRate k;
  k.raw = yield * (1.0 - binary_entropy(q_x) - worst);
  k.clamped = std::max(k.raw, 0.0);
  return k;
}

double bipartite_baseline(double two_party_rate, int parties) {
  if (parties < 2) throw std::invalid_argument("bipartite_baseline: need at least two parties");
  return two_party_rate / static_cast<double>(parties - 1);
}

}  // namespace ghzswitch
