#pragma once

#include "ghzswitch/density_matrix.h"

namespace ghzswitch {

/// Hardware noise parameters shared by every link.
struct NoiseParams {
  double f_init = 0.99;  // initial Bell-pair fidelity, in [1/4, 1]
  double t_dp = 1.0;     // memory dephasing time in seconds, > 0
  double p_dark = 1e-6;  // dark-count probability per detection window, in [0, 1)

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// F|Phi+><Phi+| + (1-F)/3 (|Phi-><Phi-| + |Psi+><Psi+| + |Psi-><Psi-|) on (a, b).
DensityMatrix bell_pair(double f_init, QubitLabel a, QubitLabel b);

/// Dephasing probability after storing a qubit for `t` seconds: (1 - e^{-t/T_dp})/2.
double dephasing_lambda(double t, double t_dp);

/// (1-lambda) rho + lambda Z rho Z on `qubit`.
DensityMatrix apply_dephasing(const DensityMatrix& rho, const QubitLabel& qubit, double lambda);

/// alpha rho + (1-alpha) tr_q(rho) (x) 1/2, with the mixed qubit kept at q's position.
DensityMatrix apply_dark_count_mix(const DensityMatrix& rho, const QubitLabel& qubit, double alpha);

/// lambda of two dephasing steps applied back to back.
inline double compose_dephasing(double l1, double l2) { return l1 + l2 - 2.0 * l1 * l2; }

}  // namespace ghzswitch
