#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ghzswitch/config.h"
#include "ghzswitch/keyrate.h"
#include "ghzswitch/results_io.h"

namespace ghzswitch {

/// Seed used for grid point `index` of a sweep seeded with `seed`.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// Row describing `params` with statistics from `stats`; key rates are
/// divided by (baseline_parties - 1) when a baseline is requested.
ResultRow make_row(const ScenarioParams& params, std::uint64_t n_samples, std::uint64_t seed,
                   const RunStatistics& stats, std::optional<int> baseline_parties = std::nullopt);

/// Row for a grid point whose simulation failed.
ResultRow make_error_row(const ScenarioParams& params, std::uint64_t n_samples, std::uint64_t seed,
                         const std::string& message);

/// Called after each finished grid point with (finished, total).
using SweepProgress = std::function<void(std::size_t, std::size_t)>;

/// One row per grid point, in grid order. Work is split into (point, chunk)
/// items spread over spec.workers threads; engine errors end up in the
/// row's error column.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SweepProgress& progress = nullptr);

}  // namespace ghzswitch
