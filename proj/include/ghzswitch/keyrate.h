#pragma once

#include <cstdint>
#include <vector>

#include "ghzswitch/density_matrix.h"
#include "ghzswitch/ghz_diagonal.h"
#include "ghzswitch/protocol.h"

namespace ghzswitch {

/// Aggregate of a batch of GHZ samples.
struct RunStatistics {
  GhzDiagonalState mean_ghz;  // average client state, dealer first
  std::uint64_t n_samples = 0;
  double total_time = 0.0;    // simulated seconds covered by the batch
  double yield_per_second = 0.0;
  double yield_stderr = 0.0;
  double q_x = 0.0;
  double stderr_q_x = 0.0;
  std::vector<double> q_z;         // Q_{B1,Bi} for i = 2..N
  std::vector<double> stderr_q_z;
  double fidelity = 0.0;
  std::uint64_t discards = 0;
  double discard_fraction = 0.0;
  std::vector<PartyStorage> mean_storage;
  double key_rate_raw = 0.0;
  double key_rate_clamped = 0.0;
  double key_rate_stderr = 0.0;

  DensityMatrix mean_state() const { return mean_ghz.to_density_matrix(); }
  std::size_t q_z_argmax() const;
  double q_z_max() const { return q_z.at(q_z_argmax()); }
  double q_z_max_stderr() const { return stderr_q_z.at(q_z_argmax()); }
};

/// (1 - <X^{(x)N}>)/2 over the whole register.
double qber_x(const DensityMatrix& rho);

/// (1 - <Z_1 Z_i>)/2 between the first qubit and party i (1-based, 2 <= i <= N).
double qber_z(const DensityMatrix& rho, std::size_t party);

/// h2(q) in bits with h2(0) = h2(1) = 0.
double binary_entropy(double q);

struct KeyRate {
  double raw = 0.0;
  double clamped = 0.0;
};

/// Y [1 - h2(Q_X) - max_i h2(Q_{B1,Bi})].
KeyRate cka_rate(double yield, double q_x, const std::vector<double>& q_z);

/// Key rate of a two-party run normalized by the N - 1 network uses needed to
/// serve N parties with bipartite links.
double bipartite_baseline(double two_party_rate, int parties);

}  // namespace ghzswitch
