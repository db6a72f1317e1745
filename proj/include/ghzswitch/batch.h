#pragma once

#include <cstdint>
#include <vector>

#include "ghzswitch/keyrate.h"
#include "ghzswitch/protocol.h"

namespace ghzswitch {

/// Count, mean and sum of squared deviations; mergeable (Chan et al.).
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningMoments& other);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const;
};

/// Running sums over SampleRecords. Accumulators of independent batches can
/// be merged; merging in a fixed order gives bit-reproducible statistics.
class BatchAccumulator {
 public:
  explicit BatchAccumulator(std::size_t parties);

  void add(const SampleRecord& record, double previous_completion);
  void merge(const BatchAccumulator& other);
  std::uint64_t count() const { return n_; }
  std::size_t parties() const { return parties_; }

  RunStatistics finalize() const;

 private:
  std::size_t parties_;
  std::uint64_t n_ = 0;
  GhzDiagonalState weight_sum_;
  RunningMoments qx_;
  std::vector<RunningMoments> qz_;
  RunningMoments gap_;
  double total_time_ = 0.0;
  std::vector<PartyStorage> storage_sum_;
  std::uint64_t discards_ = 0;
};

/// Runs n_samples back to back on one clock starting at 0.
BatchAccumulator simulate_batch(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed);

RunStatistics run_batch(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed);

/// Samples and seed of chunk `c` when n_samples are split into `chunks`.
std::uint64_t chunk_samples(std::uint64_t n_samples, std::size_t chunks, std::size_t c);
std::uint64_t chunk_seed(std::uint64_t seed, std::size_t chunks, std::size_t c);

/// Splits n_samples over `chunks` independent batches with seeds derived from
/// (seed, chunk index), runs them on up to `workers` threads, and merges the
/// results in chunk order. Output depends on `chunks` but never on `workers`.
RunStatistics run_batch_split(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed,
                              std::size_t chunks, std::size_t workers);

}  // namespace ghzswitch
