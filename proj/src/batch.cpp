#include "ghzswitch/batch.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ghzswitch/parallel.h"
#include "ghzswitch/rng.h"

namespace ghzswitch {

namespace {

double entropy_slope(double q) {
  if (!(q > 0.0 && q < 1.0)) return 0.0;
  return std::log2((1.0 - q) / q);
}

}  // namespace

void RunningMoments::add(double x) {
  ++n;
  const double delta = x - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (x - mean);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n), nb = static_cast<double>(other.n);
  const double delta = other.mean - mean;
  const double total = na + nb;
  mean += delta * nb / total;
  m2 += other.m2 + delta * delta * na * nb / total;
  n += other.n;
}

double RunningMoments::stderr_of_mean() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

BatchAccumulator::BatchAccumulator(std::size_t parties)
    : parties_(parties),
      weight_sum_(parties, std::vector<double>(std::size_t{1} << parties, 0.0)),
      qz_(parties - 1),
      storage_sum_(parties) {}

void BatchAccumulator::add(const SampleRecord& record, double previous_completion) {
  if (record.state.parties() != parties_) throw std::invalid_argument("sample has wrong party count");
  ++n_;
  weight_sum_ += record.state;
  qx_.add(0.5 * (1.0 - record.state.expect_x_parity()));
  for (std::size_t i = 0; i + 1 < parties_; ++i) qz_[i].add(0.5 * (1.0 - record.state.expect_zz(i + 2)));
  const double gap = record.completed_at - previous_completion;
  gap_.add(gap);
  total_time_ += gap;
  for (std::size_t p = 0; p < parties_; ++p) {
    storage_sum_[p].central += record.storage[p].central;
    storage_sum_[p].client += record.storage[p].client;
  }
  discards_ += record.discards;
}

void BatchAccumulator::merge(const BatchAccumulator& other) {
  if (other.parties_ != parties_) throw std::invalid_argument("cannot merge batches of different party count");
  n_ += other.n_;
  weight_sum_ += other.weight_sum_;
  qx_.merge(other.qx_);
  for (std::size_t i = 0; i < qz_.size(); ++i) qz_[i].merge(other.qz_[i]);
  gap_.merge(other.gap_);
  total_time_ += other.total_time_;
  for (std::size_t p = 0; p < parties_; ++p) {
    storage_sum_[p].central += other.storage_sum_[p].central;
    storage_sum_[p].client += other.storage_sum_[p].client;
  }
  discards_ += other.discards_;
}

RunStatistics BatchAccumulator::finalize() const {
  if (n_ == 0) throw std::logic_error("cannot summarize an empty batch");
  const double n = static_cast<double>(n_);
  RunStatistics s;
  s.n_samples = n_;
  s.mean_ghz = weight_sum_.scaled(1.0 / n);
  s.total_time = total_time_;
  s.yield_per_second = n / total_time_;
  s.yield_stderr = gap_.mean > 0.0 ? s.yield_per_second * gap_.stderr_of_mean() / gap_.mean : 0.0;

  s.q_x = std::clamp(0.5 * (1.0 - s.mean_ghz.expect_x_parity()), 0.0, 1.0);
  s.stderr_q_x = qx_.stderr_of_mean();
  for (std::size_t i = 0; i + 1 < parties_; ++i) {
    s.q_z.push_back(std::clamp(0.5 * (1.0 - s.mean_ghz.expect_zz(i + 2)), 0.0, 1.0));
    s.stderr_q_z.push_back(qz_[i].stderr_of_mean());
  }
  s.fidelity = s.mean_ghz.fidelity();
  s.discards = discards_;
  s.discard_fraction = static_cast<double>(discards_) / (static_cast<double>(discards_) + n * static_cast<double>(parties_));
  for (const auto& st : storage_sum_) s.mean_storage.push_back({st.central / n, st.client / n});

  const KeyRate k = cka_rate(s.yield_per_second, s.q_x, s.q_z);
  s.key_rate_raw = k.raw;
  s.key_rate_clamped = k.clamped;
  // first-order propagation, treating yield and QBER estimates as independent
  const std::size_t worst = s.q_z_argmax();
  const double per_state = k.raw / s.yield_per_second;
  const double dq_x = s.yield_per_second * entropy_slope(s.q_x) * s.stderr_q_x;
  const double dq_z = s.yield_per_second * entropy_slope(s.q_z[worst]) * s.stderr_q_z[worst];
  const double dy = per_state * s.yield_stderr;
  s.key_rate_stderr = std::sqrt(dy * dy + dq_x * dq_x + dq_z * dq_z);
  return s;
}

BatchAccumulator simulate_batch(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  GeometricTrials trials(seed, static_cast<std::size_t>(config.parties), static_cast<std::size_t>(config.memories));
  SwitchSimulator sim(config, trials, 0.0);
  BatchAccumulator acc(static_cast<std::size_t>(config.parties));
  double previous = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    SampleRecord record = sim.next();
    acc.add(record, previous);
    previous = record.completed_at;
  }
  return acc;
}

RunStatistics run_batch(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed) {
  return simulate_batch(config, n_samples, seed).finalize();
}

std::uint64_t chunk_samples(std::uint64_t n_samples, std::size_t chunks, std::size_t c) {
  return n_samples / chunks + (c < n_samples % chunks ? 1 : 0);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::size_t chunks, std::size_t c) {
  return chunks <= 1 ? seed : mix_seed(seed, c);
}

RunStatistics run_batch_split(const ProtocolConfig& config, std::uint64_t n_samples, std::uint64_t seed,
                              std::size_t chunks, std::size_t workers) {
  if (chunks <= 1) return run_batch(config, n_samples, seed);
  if (n_samples < chunks) throw std::invalid_argument("n_samples must be >= chunks");
  std::vector<BatchAccumulator> parts(chunks, BatchAccumulator(static_cast<std::size_t>(config.parties)));
  parallel_for(chunks, workers, [&](std::size_t c) {
    parts[c] = simulate_batch(config, chunk_samples(n_samples, chunks, c), chunk_seed(seed, chunks, c));
  });
  BatchAccumulator total = parts.front();
  for (std::size_t c = 1; c < chunks; ++c) total.merge(parts[c]);
  return total.finalize();
}

}  // namespace ghzswitch
