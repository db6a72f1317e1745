#include "ghzswitch/density_matrix.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ghzswitch {

namespace {

std::size_t bit_of(std::size_t index, std::size_t pos, std::size_t n) {
  return (index >> (n - 1 - pos)) & 1U;
}

bool is_power_of_two(Eigen::Index v) { return v > 0 && (v & (v - 1)) == 0; }

void require_distinct(const std::vector<QubitLabel>& labels) {
  std::set<QubitLabel> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw std::invalid_argument("register contains duplicate qubit labels");
  }
}

}  // namespace

std::string QubitLabel::str() const {
  return (site == Site::kClient ? "B" : "C") + std::to_string(party);
}

DensityMatrix::DensityMatrix(Matrix entries, std::vector<QubitLabel> labels)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
  if (entries_.rows() != entries_.cols() || !is_power_of_two(entries_.rows())) {
    throw std::invalid_argument("density matrix must be square with power-of-two dimension");
  }
  if (entries_.rows() != (Eigen::Index{1} << labels_.size())) {
    throw std::invalid_argument("dimension does not match number of qubit labels");
  }
  require_distinct(labels_);
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& psi, std::vector<QubitLabel> labels) {
  return DensityMatrix(psi * psi.adjoint(), std::move(labels));
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<QubitLabel> labels) {
  const Eigen::Index d = Eigen::Index{1} << labels.size();
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d), std::move(labels));
}

DensityMatrix DensityMatrix::ghz(std::vector<QubitLabel> labels) {
  const Eigen::Index d = Eigen::Index{1} << labels.size();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
  psi(0) = psi(d - 1) = 1.0 / std::sqrt(2.0);
  return from_pure(psi, std::move(labels));
}

std::size_t DensityMatrix::position(const QubitLabel& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw std::invalid_argument("qubit " + label.str() + " is not in the register");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

bool DensityMatrix::contains(const QubitLabel& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_valid(const StateCheckTolerance& tol) const {
  const Complex tr = trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "trace " << tr << " deviates from 1";
    throw std::runtime_error(os.str());
  }
  if (const double h = hermiticity_error(); h > tol.hermitian) {
    throw std::runtime_error("matrix is not Hermitian (error " + std::to_string(h) + ")");
  }
  if (const double ev = min_eigenvalue(); ev < tol.min_eigenvalue) {
    throw std::runtime_error("matrix is not positive semidefinite (min eigenvalue " +
                             std::to_string(ev) + ")");
  }
}

bool DensityMatrix::is_valid(const StateCheckTolerance& tol) const {
  try {
    check_valid(tol);
    return true;
  } catch (const std::runtime_error&) {
    return false;
  }
}

DensityMatrix DensityMatrix::permuted(const std::vector<QubitLabel>& order) const {
  const std::size_t n = num_qubits();
  if (order.size() != n) {
    throw std::invalid_argument("permutation must list every qubit exactly once");
  }
  std::vector<std::size_t> source(n);
  for (std::size_t j = 0; j < n; ++j) source[j] = position(order[j]);
  require_distinct(order);

  const std::size_t d = dim();
  std::vector<Eigen::Index> map(d);
  for (std::size_t b = 0; b < d; ++b) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < n; ++j) out = (out << 1U) | bit_of(b, source[j], n);
    map[b] = static_cast<Eigen::Index>(out);
  }
  Matrix result(entries_.rows(), entries_.cols());
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      result(map[r], map[c]) = entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return DensityMatrix(std::move(result), order);
}

double DensityMatrix::max_abs_diff(const DensityMatrix& other) const {
  const DensityMatrix aligned = other.permuted(labels_);
  return (entries_ - aligned.entries_).cwiseAbs().maxCoeff();
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<QubitLabel> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  const Matrix& ea = a.entries();
  const Matrix& eb = b.entries();
  Matrix out(ea.rows() * eb.rows(), ea.cols() * eb.cols());
  for (Eigen::Index i = 0; i < ea.rows(); ++i) {
    for (Eigen::Index j = 0; j < ea.cols(); ++j) {
      out.block(i * eb.rows(), j * eb.cols(), eb.rows(), eb.cols()) = ea(i, j) * eb;
    }
  }
  return DensityMatrix(std::move(out), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<QubitLabel>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::set<QubitLabel> keep_set(keep.begin(), keep.end());
  std::vector<QubitLabel> kept;
  std::vector<QubitLabel> traced;
  for (const auto& label : rho.labels()) {
    (keep_set.count(label) ? kept : traced).push_back(label);
  }
  if (kept.size() != keep_set.size()) {
    for (const auto& label : keep) rho.position(label);  // throws for the missing one
  }
  if (traced.empty()) return rho;

  std::vector<QubitLabel> order = kept;
  order.insert(order.end(), traced.begin(), traced.end());
  const DensityMatrix sorted = rho.permuted(order);
  const Eigen::Index dk = Eigen::Index{1} << kept.size();
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex sum = 0.0;
      for (Eigen::Index t = 0; t < dt; ++t) sum += sorted.entries()(r * dt + t, c * dt + t);
      out(r, c) = sum;
    }
  }
  return DensityMatrix(std::move(out), std::move(kept));
}

double expect_pauli(const DensityMatrix& rho, const PauliString& pauli) {
  const std::size_t n = rho.num_qubits();
  std::size_t xmask = 0;
  std::vector<std::pair<std::size_t, Pauli>> ops;
  for (const auto& [label, p] : pauli) {
    const std::size_t pos = rho.position(label);
    if (p == Pauli::kI) continue;
    ops.emplace_back(pos, p);
    if (p == Pauli::kX || p == Pauli::kY) xmask |= std::size_t{1} << (n - 1 - pos);
  }
  // Tr(rho P) = sum_r rho[r, r^x] * P[r^x, r]
  Complex sum = 0.0;
  const std::size_t d = rho.dim();
  for (std::size_t r = 0; r < d; ++r) {
    Complex phase = 1.0;
    for (const auto& [pos, p] : ops) {
      const std::size_t bit = bit_of(r, pos, n);
      if (p == Pauli::kZ) {
        if (bit) phase = -phase;
      } else if (p == Pauli::kY) {
        phase *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
      }
    }
    sum += rho(r, r ^ xmask) * phase;
  }
  return sum.real();
}

DensityMatrix conjugate_pauli(const DensityMatrix& rho, const QubitLabel& qubit, Pauli p) {
  const std::size_t n = rho.num_qubits();
  const std::size_t pos = rho.position(qubit);
  if (p == Pauli::kI) return rho;
  const std::size_t mask = std::size_t{1} << (n - 1 - pos);
  const bool flips = p == Pauli::kX || p == Pauli::kY;
  const bool signs = p == Pauli::kZ || p == Pauli::kY;
  const std::size_t d = rho.dim();
  Matrix out(rho.entries().rows(), rho.entries().cols());
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t sr = flips ? (r ^ mask) : r;
      const std::size_t sc = flips ? (c ^ mask) : c;
      Complex v = rho(sr, sc);
      // Y = iXZ; the i factors cancel between Y and Y^dagger, leaving the Z signs.
      if (signs && (((sr & mask) != 0) != ((sc & mask) != 0))) v = -v;
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return DensityMatrix(std::move(out), rho.labels());
}

double fidelity_to_ghz(const DensityMatrix& rho) {
  const std::size_t last = rho.dim() - 1;
  const double f = 0.5 * (rho(0, 0) + rho(last, last) + rho(0, last) + rho(last, 0)).real();
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace ghzswitch
