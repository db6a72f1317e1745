#include "ghzswitch/sweep.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

#include "ghzswitch/batch.h"
#include "ghzswitch/parallel.h"
#include "ghzswitch/rng.h"

namespace ghzswitch {

namespace {

ResultRow describe(const ScenarioParams& p, std::uint64_t n_samples, std::uint64_t seed) {
  ResultRow r;
  r.scenario = p.kind.name();
  r.goal = p.kind.goal_name();
  r.source = p.kind.source_name();
  r.parties = p.parties;
  r.memories = p.memories;
  try {
    r.lengths_km = p.geometry.lengths(p.parties, p.dealer);
  } catch (const std::exception&) {
    r.lengths_km.clear();
  }
  r.t_cut_s = p.t_cut;
  r.t_dp_s = p.noise.t_dp;
  r.f_init = p.noise.f_init;
  r.p_dark = p.noise.p_dark;
  r.p_link = p.p_link;
  r.t_prep_s = p.t_prep;
  r.n_samples = n_samples;
  r.seed = seed;
  return r;
}

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

struct PointState {
  std::optional<ProtocolConfig> config;
  std::string error;
  std::vector<std::optional<BatchAccumulator>> parts;
  std::size_t remaining = 0;
  double seconds = 0.0;
};

}  // namespace

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) { return mix_seed(seed, index); }

ResultRow make_row(const ScenarioParams& params, std::uint64_t n_samples, std::uint64_t seed,
                   const RunStatistics& s, std::optional<int> baseline_parties) {
  ResultRow r = describe(params, n_samples, seed);
  r.yield_per_s = s.yield_per_second;
  r.q_x = s.q_x;
  r.q_x_stderr = s.stderr_q_x;
  r.q_z_max = s.q_z_max();
  r.q_z_max_stderr = s.q_z_max_stderr();
  r.fidelity = s.fidelity;
  r.key_rate_raw = s.key_rate_raw;
  r.key_rate_clamped = s.key_rate_clamped;
  if (baseline_parties) {
    r.key_rate_raw = bipartite_baseline(r.key_rate_raw, *baseline_parties);
    r.key_rate_clamped = bipartite_baseline(r.key_rate_clamped, *baseline_parties);
  }
  r.discard_fraction = s.discard_fraction;
  // statistics come dealer first; report them in party order
  const auto dealer = static_cast<std::size_t>(params.dealer - 1);
  r.mean_storage_s.assign(s.mean_storage.size(), 0.0);
  for (std::size_t k = 0; k < s.mean_storage.size(); ++k) {
    const std::size_t party = k == 0 ? dealer : (k - 1 < dealer ? k - 1 : k);
    r.mean_storage_s[party] = s.mean_storage[k].central;
  }
  return r;
}

ResultRow make_error_row(const ScenarioParams& params, std::uint64_t n_samples, std::uint64_t seed,
                         const std::string& message) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  ResultRow r = describe(params, n_samples, seed);
  r.yield_per_s = r.q_x = r.q_x_stderr = r.q_z_max = r.q_z_max_stderr = kNaN;
  r.fidelity = r.key_rate_raw = r.key_rate_clamped = r.discard_fraction = kNaN;
  r.error = one_line(message);
  return r;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const SweepProgress& progress) {
  using Clock = std::chrono::steady_clock;
  const std::size_t points = spec.grid_size();
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(spec.chunks, spec.n_samples));

  std::vector<ScenarioParams> params;
  std::vector<PointState> state(points);
  for (std::size_t i = 0; i < points; ++i) {
    params.push_back(spec.point(i));
    try {
      state[i].config = params[i].to_protocol_config();
    } catch (const std::exception& e) {
      state[i].error = e.what();
    }
    state[i].parts.resize(chunks);
    state[i].remaining = chunks;
  }

  std::mutex mutex;
  std::size_t finished = 0;
  parallel_for(points * chunks, spec.workers, [&](std::size_t item) {
    const std::size_t i = item / chunks, c = item % chunks;
    PointState& ps = state[i];
    const auto start = Clock::now();
    std::optional<BatchAccumulator> part;
    std::string error;
    {
      std::lock_guard lock(mutex);
      error = ps.error;
    }
    if (error.empty() && ps.config) {
      try {
        part = simulate_batch(*ps.config, chunk_samples(spec.n_samples, chunks, c),
                              chunk_seed(point_seed(spec.seed, i), chunks, c));
      } catch (const std::exception& e) {
        error = e.what();
      }
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::lock_guard lock(mutex);
    ps.seconds += seconds;
    if (!error.empty() && ps.error.empty()) ps.error = error;
    ps.parts[c] = std::move(part);
    if (--ps.remaining == 0) {
      ++finished;
      if (progress) progress(finished, points);
    }
  });

  std::vector<ResultRow> rows;
  rows.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    PointState& ps = state[i];
    ResultRow row;
    if (!ps.error.empty()) {
      row = make_error_row(params[i], spec.n_samples, spec.seed, ps.error);
    } else {
      BatchAccumulator total = *ps.parts.front();
      for (std::size_t c = 1; c < chunks; ++c) total.merge(*ps.parts[c]);
      try {
        row = make_row(params[i], spec.n_samples, spec.seed, total.finalize(), spec.bipartite_baseline_parties);
      } catch (const std::exception& e) {
        row = make_error_row(params[i], spec.n_samples, spec.seed, e.what());
      }
    }
    row.wall_time_s = ps.seconds;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ghzswitch
