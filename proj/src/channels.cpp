#include "ghzswitch/channels.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzswitch {

void NoiseParams::validate() const {
  if (!(f_init >= 0.25 && f_init <= 1.0)) {
    throw std::invalid_argument("F_init must lie in [0.25, 1], got " + std::to_string(f_init));
  }
  if (!(t_dp > 0.0)) throw std::invalid_argument("T_dp must be > 0");
  if (!(p_dark >= 0.0 && p_dark < 1.0)) throw std::invalid_argument("P_D must lie in [0, 1)");
}

DensityMatrix bell_pair(double f_init, QubitLabel a, QubitLabel b) {
  if (!(f_init >= 0.25 && f_init <= 1.0)) {
    throw std::invalid_argument("bell_pair: F_init must lie in [0.25, 1]");
  }
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector4cd phi_p(s, 0, 0, s), phi_m(s, 0, 0, -s), psi_p(0, s, s, 0), psi_m(0, s, -s, 0);
  const double rest = (1.0 - f_init) / 3.0;
  Matrix rho = f_init * phi_p * phi_p.adjoint() +
               rest * (phi_m * phi_m.adjoint() + psi_p * psi_p.adjoint() + psi_m * psi_m.adjoint());
  return DensityMatrix(std::move(rho), {a, b});
}

double dephasing_lambda(double t, double t_dp) {
  if (!(t >= 0.0)) throw std::invalid_argument("dephasing_lambda: storage time must be >= 0");
  if (!(t_dp > 0.0)) throw std::invalid_argument("dephasing_lambda: T_dp must be > 0");
  return -0.5 * std::expm1(-t / t_dp);
}

DensityMatrix apply_dephasing(const DensityMatrix& rho, const QubitLabel& qubit, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 0.5)) {
    throw std::invalid_argument("apply_dephasing: lambda must lie in [0, 1/2]");
  }
  const std::size_t n = rho.num_qubits();
  const std::size_t mask = std::size_t{1} << (n - 1 - rho.position(qubit));
  // Z rho Z flips the sign of coherences between |0> and |1> on this qubit.
  const double damp = 1.0 - 2.0 * lambda;
  Matrix out = rho.entries();
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      if (((static_cast<std::size_t>(r) ^ static_cast<std::size_t>(c)) & mask) != 0) out(r, c) *= damp;
    }
  }
  return DensityMatrix(std::move(out), rho.labels());
}

DensityMatrix apply_dark_count_mix(const DensityMatrix& rho, const QubitLabel& qubit, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("apply_dark_count_mix: alpha must lie in [0, 1]");
  }
  const std::size_t n = rho.num_qubits();
  const std::size_t mask = std::size_t{1} << (n - 1 - rho.position(qubit));
  const Matrix& in = rho.entries();
  Matrix out(in.rows(), in.cols());
  for (Eigen::Index r = 0; r < in.rows(); ++r) {
    for (Eigen::Index c = 0; c < in.cols(); ++c) {
      const auto ur = static_cast<std::size_t>(r);
      const auto uc = static_cast<std::size_t>(c);
      Complex replaced = 0.0;
      if (((ur ^ uc) & mask) == 0) {
        const auto r0 = static_cast<Eigen::Index>(ur & ~mask), c0 = static_cast<Eigen::Index>(uc & ~mask);
        const auto r1 = static_cast<Eigen::Index>(ur | mask), c1 = static_cast<Eigen::Index>(uc | mask);
        replaced = 0.5 * (in(r0, c0) + in(r1, c1));
      }
      out(r, c) = alpha * in(r, c) + (1.0 - alpha) * replaced;
    }
  }
  return DensityMatrix(std::move(out), rho.labels());
}

}  // namespace ghzswitch
