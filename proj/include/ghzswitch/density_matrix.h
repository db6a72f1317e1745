#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ghzswitch {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Which side of a link a qubit lives on.
enum class Site { kClient, kCentral };

/// Identifies one tensor factor of a register: the client qubit B_k or the
/// central-station qubit C_k belonging to party k (1-based).
struct QubitLabel {
  Site site = Site::kClient;
  int party = 1;

  static QubitLabel client(int party) { return {Site::kClient, party}; }
  static QubitLabel central(int party) { return {Site::kCentral, party}; }

  std::string str() const;
  friend bool operator==(const QubitLabel&, const QubitLabel&) = default;
  friend auto operator<=>(const QubitLabel&, const QubitLabel&) = default;
};

enum class Pauli { kI, kX, kY, kZ };

using PauliString = std::map<QubitLabel, Pauli>;

struct StateCheckTolerance {
  double trace = 1e-9;
  double hermitian = 1e-9;
  double min_eigenvalue = -1e-9;
};

/// Dense density matrix over an ordered register of labelled qubits.
///
/// Qubit 0 is the most significant bit of the basis index, so the tensor
/// order matches `labels()`. All operations are value-returning; nothing in
/// this module mutates its inputs.
class DensityMatrix {
 public:
  DensityMatrix(Matrix entries, std::vector<QubitLabel> labels);

  /// |psi><psi| for a state vector given in the register's basis order.
  static DensityMatrix from_pure(const Eigen::VectorXcd& psi, std::vector<QubitLabel> labels);
  static DensityMatrix maximally_mixed(std::vector<QubitLabel> labels);
  /// (|0...0> + |1...1>)/sqrt(2) on the given register.
  static DensityMatrix ghz(std::vector<QubitLabel> labels);

  std::size_t num_qubits() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  const std::vector<QubitLabel>& labels() const { return labels_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  /// Position of `label` in the register; throws std::invalid_argument if absent.
  std::size_t position(const QubitLabel& label) const;
  bool contains(const QubitLabel& label) const;

  Complex trace() const { return entries_.trace(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Throws std::runtime_error naming the violated invariant.
  void check_valid(const StateCheckTolerance& tol = {}) const;
  bool is_valid(const StateCheckTolerance& tol = {}) const;

  /// Reorders tensor factors; `order` lists the new label sequence.
  DensityMatrix permuted(const std::vector<QubitLabel>& order) const;

  /// Largest elementwise |a - b| after aligning b to this register's order.
  double max_abs_diff(const DensityMatrix& other) const;

 private:
  Matrix entries_;
  std::vector<QubitLabel> labels_;
};

/// rho_a (x) rho_b with concatenated registers; registers must be disjoint.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`, preserving the original relative label order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<QubitLabel>& keep);

/// Tr(rho P) for a Pauli string; labels missing from `pauli` act as identity.
double expect_pauli(const DensityMatrix& rho, const PauliString& pauli);

/// P rho P for a single-qubit Pauli.
DensityMatrix conjugate_pauli(const DensityMatrix& rho, const QubitLabel& qubit, Pauli p);

/// <GHZ|rho|GHZ> against (|0...0> + |1...1>)/sqrt(2) in register order.
double fidelity_to_ghz(const DensityMatrix& rho);

}  // namespace ghzswitch
