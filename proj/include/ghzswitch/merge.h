#pragma once

#include "ghzswitch/density_matrix.h"

namespace ghzswitch {

/// Fuses a Bell pair (or any register holding `central_b`) into a growing GHZ
/// register held by the central station.
///
/// Applies the two-outcome POVM {|0><00| + |1><11|, |0><01| + |1><10|} to
/// (central_a, central_b), X-corrects every non-central qubit of `pair` in the
/// second branch, and returns the sum of both branches. The result is ordered
/// (acc without central_a, pair without central_b, central_a).
DensityMatrix merge_step(const DensityMatrix& acc, const DensityMatrix& pair,
                         const QubitLabel& central_a, const QubitLabel& central_b);

/// Measures `central` in the X basis, Z-corrects the first remaining qubit on
/// the -1 outcome, and returns the branch sum with `central` removed.
DensityMatrix final_x_measurement(const DensityMatrix& rho, const QubitLabel& central);

/// Runs merge_step over `pairs` (each ordered (client, central)) and finishes
/// with final_x_measurement. Output register: the clients in input order.
DensityMatrix merge_pairs(const std::vector<DensityMatrix>& pairs);

}  // namespace ghzswitch
