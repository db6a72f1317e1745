#include "ghzswitch/merge.h"

#include <stdexcept>

namespace ghzswitch {

namespace {

std::vector<QubitLabel> without(const std::vector<QubitLabel>& labels, const QubitLabel& drop) {
  std::vector<QubitLabel> out;
  for (const auto& l : labels) {
    if (!(l == drop)) out.push_back(l);
  }
  return out;
}

}  // namespace

DensityMatrix merge_step(const DensityMatrix& acc, const DensityMatrix& pair,
                         const QubitLabel& central_a, const QubitLabel& central_b) {
  if (!acc.contains(central_a)) {
    throw std::invalid_argument("merge_step: " + central_a.str() + " not in accumulated register");
  }
  if (!pair.contains(central_b)) {
    throw std::invalid_argument("merge_step: " + central_b.str() + " not in pair register");
  }
  for (const auto& l : pair.labels()) {
    if (acc.contains(l)) throw std::invalid_argument("merge_step: registers overlap on " + l.str());
  }

  const std::vector<QubitLabel> acc_rest = without(acc.labels(), central_a);
  const std::vector<QubitLabel> pair_rest = without(pair.labels(), central_b);
  std::vector<QubitLabel> order = acc_rest;
  order.insert(order.end(), pair_rest.begin(), pair_rest.end());
  order.push_back(central_a);
  order.push_back(central_b);
  const Matrix in = tensor(acc, pair).permuted(order).entries();

  const std::size_t rest = acc_rest.size() + pair_rest.size();
  const Eigen::Index d_rest = Eigen::Index{1} << rest;
  // pair_rest occupies the low bits of the rest index
  const Eigen::Index correction_mask = (Eigen::Index{1} << pair_rest.size()) - 1;

  Matrix out = Matrix::Zero(2 * d_rest, 2 * d_rest);
  for (Eigen::Index r = 0; r < d_rest; ++r) {
    for (Eigen::Index c = 0; c < d_rest; ++c) {
      for (Eigen::Index s = 0; s < 2; ++s) {
        for (Eigen::Index t = 0; t < 2; ++t) {
          // |s><s,s| branch
          out(2 * r + s, 2 * c + t) += in(4 * r + 3 * s, 4 * c + 3 * t);
          // |s><s,1-s| branch, then X on the pair's remaining qubits
          const Eigen::Index rx = r ^ correction_mask, cx = c ^ correction_mask;
          out(2 * r + s, 2 * c + t) += in(4 * rx + 2 * s + (1 - s), 4 * cx + 2 * t + (1 - t));
        }
      }
    }
  }
  std::vector<QubitLabel> labels = acc_rest;
  labels.insert(labels.end(), pair_rest.begin(), pair_rest.end());
  labels.push_back(central_a);
  return DensityMatrix(std::move(out), std::move(labels));
}

DensityMatrix final_x_measurement(const DensityMatrix& rho, const QubitLabel& central) {
  if (!rho.contains(central)) {
    throw std::invalid_argument("final_x_measurement: " + central.str() + " not in register");
  }
  if (rho.num_qubits() < 2) {
    throw std::invalid_argument("final_x_measurement: register needs at least two qubits");
  }
  std::vector<QubitLabel> rest = without(rho.labels(), central);
  std::vector<QubitLabel> order = rest;
  order.push_back(central);
  const Matrix in = rho.permuted(order).entries();

  const Eigen::Index d = Eigen::Index{1} << rest.size();
  const Eigen::Index top = d >> 1;  // Z correction acts on the first remaining qubit
  Matrix out(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      Complex plus = 0.0, minus = 0.0;
      for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
          const Complex v = 0.5 * in(2 * r + a, 2 * c + b);
          plus += v;
          minus += (a ^ b) ? -v : v;
        }
      }
      if (((r ^ c) & top) != 0) minus = -minus;
      out(r, c) = plus + minus;
    }
  }
  return DensityMatrix(std::move(out), std::move(rest));
}

DensityMatrix merge_pairs(const std::vector<DensityMatrix>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("merge_pairs: need at least two pairs");
  for (const auto& p : pairs) {
    if (p.num_qubits() != 2) throw std::invalid_argument("merge_pairs: every input must be a two-qubit pair");
  }
  DensityMatrix acc = pairs.front();
  const QubitLabel survivor = acc.labels()[1];
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    acc = merge_step(acc, pairs[k], survivor, pairs[k].labels()[1]);
  }
  return final_x_measurement(acc, survivor);
}

}  // namespace ghzswitch
