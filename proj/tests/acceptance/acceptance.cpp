// Acceptance suite: one PASS/FAIL line per criterion, exit status is the
// number of failing criteria. Pass criterion ids to run a subset.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ghzswitch/batch.h"
#include "ghzswitch/channels.h"
#include "ghzswitch/keyrate.h"
#include "ghzswitch/merge.h"
#include "ghzswitch/presets.h"
#include "ghzswitch/results_io.h"
#include "ghzswitch/sweep.h"
#include "oracle.h"

using namespace ghzswitch;

namespace {

constexpr double kMergeTolerance = 1e-10;
constexpr double kStateTolerance = 1e-9;
constexpr double kCompositionTolerance = 1e-12;
constexpr double kNoiselessTolerance = 1e-9;
constexpr double kSigmas = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

ProtocolConfig symmetric(const std::string& kind, double l_km, int parties, int memories,
                         std::optional<double> t_cut = std::nullopt) {
  ProtocolConfig c;
  c.parties = parties;
  c.memories = memories;
  c.kind = ScenarioKind::parse(kind);
  LinkParams link;
  link.length_km = l_km;
  c.links.assign(static_cast<std::size_t>(parties), link);
  c.t_cut = t_cut;
  return c;
}

std::vector<double> random_bell_weights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(4);
  double total = 0.0;
  for (auto& x : p) total += (x = u(rng));
  for (auto& x : p) x /= total;
  return p;
}

Outcome merge_equivalence() {
  std::mt19937_64 rng(20250101);
  double worst = 0.0;
  int cases = 0;
  for (int n : {2, 3}) {
    for (int i = 0; i < 50; ++i, ++cases) {
      std::vector<DensityMatrix> pairs;
      std::vector<Matrix> raw;
      for (int k = 1; k <= n; ++k) {
        raw.push_back(oracle::bell_mixture(random_bell_weights(rng)));
        pairs.emplace_back(raw.back(), std::vector<QubitLabel>{QubitLabel::client(k), QubitLabel::central(k)});
      }
      const Matrix diff = merge_pairs(pairs).entries() - oracle::direct_ghz_measurement(raw);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  return {worst <= kMergeTolerance, fmt("%d cases, max elementwise deviation %.2e (tol %.0e)", cases, worst, kMergeTolerance)};
}

Outcome channel_invariants() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0;
  for (int seq = 0; seq < 1000; ++seq) {
    const int n = 2 + static_cast<int>(seq % 3);
    std::vector<DensityMatrix> pairs;
    for (int k = 1; k <= n; ++k) {
      const QubitLabel b = QubitLabel::client(k), c = QubitLabel::central(k);
      DensityMatrix p(oracle::bell_mixture(random_bell_weights(rng)), {b, c});
      // a few random channel applications per pair
      for (int step = 0; step < 3; ++step) {
        const QubitLabel q = u(rng) < 0.5 ? b : c;
        p = u(rng) < 0.5 ? apply_dephasing(p, q, 0.5 * u(rng)) : apply_dark_count_mix(p, q, u(rng));
      }
      pairs.push_back(std::move(p));
    }
    auto track = [&](const DensityMatrix& rho) {
      worst_trace = std::max(worst_trace, std::abs(rho.trace() - Complex(1.0, 0.0)));
      worst_herm = std::max(worst_herm, rho.hermiticity_error());
      worst_eig = std::min(worst_eig, rho.min_eigenvalue());
    };
    for (const auto& p : pairs) track(p);
    DensityMatrix acc = pairs[0];
    for (int k = 1; k < n; ++k) {
      acc = merge_step(acc, pairs[static_cast<std::size_t>(k)], QubitLabel::central(1), QubitLabel::central(k + 1));
      track(acc);
      acc = apply_dephasing(acc, QubitLabel::client(1 + static_cast<int>(u(rng) * k)), 0.5 * u(rng));
      track(acc);
    }
    acc = final_x_measurement(acc, QubitLabel::central(1));
    track(acc);
    acc = apply_dark_count_mix(acc, QubitLabel::client(n), u(rng));
    track(acc);
  }

  double worst_composition = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double l1 = 0.5 * u(rng), l2 = 0.5 * u(rng);
    const DensityMatrix rho(oracle::bell_mixture(random_bell_weights(rng)), {QubitLabel::client(1), QubitLabel::central(1)});
    const DensityMatrix seq = apply_dephasing(apply_dephasing(rho, QubitLabel::central(1), l1), QubitLabel::central(1), l2);
    const DensityMatrix one = apply_dephasing(rho, QubitLabel::central(1), l1 + l2 - 2 * l1 * l2);
    worst_composition = std::max(worst_composition, seq.max_abs_diff(one));
    const double t1 = u(rng), t2 = u(rng), tdp = 0.1 + u(rng);
    worst_composition = std::max(worst_composition, std::abs(compose_dephasing(dephasing_lambda(t1, tdp), dephasing_lambda(t2, tdp)) -
                                                             dephasing_lambda(t1 + t2, tdp)));
  }
  const bool pass = worst_trace <= kStateTolerance && worst_herm <= kStateTolerance && worst_eig >= -kStateTolerance &&
                    worst_composition <= kCompositionTolerance;
  return {pass, fmt("1000 sequences: trace dev %.1e, hermiticity %.1e, min eig %.1e; composition dev %.1e", worst_trace,
                    worst_herm, worst_eig, worst_composition)};
}

Outcome noiseless_limit() {
  bool pass = true;
  std::string detail;
  for (const char* kind : {"Dis-C", "Dis-B", "Meas-C", "Meas-B"}) {
    ProtocolConfig c = symmetric(kind, 20, 4, 1);
    c.noise = {1.0, 1e9, 0.0};
    for (auto& l : c.links) l.p_dark = 0.0;
    const RunStatistics s = run_batch(c, 1000, 3);
    const double rel = std::abs(s.key_rate_raw - s.yield_per_second) / s.yield_per_second;
    const bool ok = std::abs(s.fidelity - 1.0) <= kNoiselessTolerance && rel <= kNoiselessTolerance;
    pass &= ok;
    detail += fmt("%s F-1=%.1e K/Y-1=%.1e; ", kind, s.fidelity - 1.0, -rel);
  }
  return {pass, detail + "l=20 km, 1e3 samples"};
}

Outcome yield_oracle() {
  const RunStatistics s = run_batch(symmetric("Dis-C", 70, 4, 1), 10'000, 11);
  const double eta_eff = effective_success(std::exp(-70.0 / 22.0), 1e-6);
  const double t_trial = 1e-6 + 2 * 70e3 / 2e8;
  const double expected = 1.0 / (t_trial * oracle::expected_max_geometric(4, eta_eff));
  const double z = (s.yield_per_second - expected) / s.yield_stderr;
  return {std::abs(z) <= kSigmas, fmt("simulated %.5g/s, oracle %.5g/s, z = %.2f", s.yield_per_second, expected, z)};
}

Outcome fig2_thresholds() {
  constexpr std::uint64_t kSamples = 10'000;
  auto key = [&](const char* kind, double l, std::optional<double> t_cut) {
    return run_batch(symmetric(kind, l, 4, 1, t_cut), kSamples, 2025).key_rate_raw;
  };
  const double a = key("Meas-B", 200, std::nullopt);
  const double b100 = key("Meas-C", 100, std::nullopt), b120 = key("Meas-C", 120, std::nullopt);
  const double c130 = key("Meas-C", 130, 0.3);
  // vanishing claimed from 150 km on; the +10 km tolerance moves the checks to 160 and 170 km
  const double c160 = key("Meas-C", 160, 0.3), c170 = key("Meas-C", 170, 0.3);
  const bool pa = a > 0, pb = b100 > 0 && b120 <= 0, pc = c130 > 0 && c160 <= 0 && c170 <= 0;
  return {pa && pb && pc,
          fmt("(a) %s K(200)=%.3g; (b) %s K(100)=%.3g K(120)=%.3g; (c) %s K(130)=%.3g K(160)=%.3g K(170)=%.3g",
              pa ? "ok" : "FAIL", a, pb ? "ok" : "FAIL", b100, b120, pc ? "ok" : "FAIL", c130, c160, c170)};
}

Outcome multiplexing() {
  constexpr std::uint64_t kSamples = 2000;
  bool pass = false;
  std::string detail;
  for (double t_cut : {0.03, 0.05, 0.07}) {
    const double k1 = run_batch(symmetric("Dis-C", 150, 4, 1, t_cut), kSamples, 4).key_rate_raw;
    const double k5 = run_batch(symmetric("Dis-C", 150, 4, 5, t_cut), kSamples, 4).key_rate_raw;
    pass |= k5 > 0 && k1 <= 0;
    detail += fmt("t_cut=%.2f: K(m=5)=%.3g K(m=1)=%.3g; ", t_cut, k5, k1);
  }
  return {pass, detail + "Dis-C l=150 km"};
}

Outcome meas_b_cutoff_insensitivity() {
  std::vector<RunStatistics> runs;
  const std::vector<double> cuts = {0.02, 0.1, 0.5};
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    runs.push_back(run_batch(symmetric("Meas-B", 150, 4, 1, cuts[i]), 10'000, point_seed(31, i)));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const double sigma = std::hypot(runs[i].key_rate_stderr, runs[j].key_rate_stderr);
      worst = std::max(worst, std::abs(runs[i].key_rate_raw - runs[j].key_rate_raw) / sigma);
    }
  }
  return {worst < kSigmas, fmt("K = %.4g, %.4g, %.4g /s; max pairwise deviation %.2f sigma", runs[0].key_rate_raw,
                               runs[1].key_rate_raw, runs[2].key_rate_raw, worst)};
}

Outcome n_scaling() {
  std::vector<double> yield(11, 0.0);
  bool decreasing = true;
  std::string detail;
  for (int n = 2; n <= 10; ++n) {
    yield[static_cast<std::size_t>(n)] = run_batch(symmetric("Dis-C", 70, n, 1), 1000, 8).yield_per_second;
    if (n > 2) decreasing &= yield[static_cast<std::size_t>(n)] < yield[static_cast<std::size_t>(n - 1)];
  }
  const double drop45 = 1 - yield[5] / yield[4], drop910 = 1 - yield[10] / yield[9];
  return {decreasing && drop45 > drop910,
          fmt("Y(2..10) %s; drop 4->5 %.1f%%, 9->10 %.1f%%", decreasing ? "decreasing" : "NOT decreasing", 100 * drop45,
              100 * drop910)};
}

Outcome bipartite_identity() {
  ProtocolConfig c = symmetric("Dis-C", 4, 2, 1, 0.015);
  c.links[0].length_km = 60;
  const RunStatistics s = run_batch(c, 1000, 5);
  const bool direct = bipartite_baseline(s.key_rate_raw, 4) == s.key_rate_raw / 3;
  ScenarioParams p;
  p.parties = 2;
  p.geometry.l_b1_km = 60;
  p.geometry.l_b_km = 4;
  const ResultRow row = make_row(p, 1000, 5, s, 4);
  const bool via_row = row.key_rate_raw == s.key_rate_raw / 3;
  return {direct && via_row, fmt("rate %.17g -> %.17g", s.key_rate_raw, row.key_rate_raw)};
}

Outcome determinism() {
  SweepSpec spec = preset("n-scaling-fig5");
  spec.n_samples = 1000;
  auto csv = [&](std::size_t workers) {
    spec.workers = workers;
    return strip_wall_time(emit_results(run_sweep(spec), OutputFormat::kCsv));
  };
  const std::string a = csv(1), b = csv(1), c = csv(4);
  return {a == b && a == c, fmt("preset n-scaling-fig5, %zu rows, workers {1,1,4}: %s", spec.grid_size(),
                                a == b && a == c ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {1, "merge equivalence with direct GHZ-basis measurement", merge_equivalence},
      {2, "channel invariants and dephasing composition", channel_invariants},
      {3, "noiseless limit", noiseless_limit},
      {4, "yield vs maximum-of-geometrics oracle", yield_oracle},
      {5, "distance thresholds, single memory", fig2_thresholds},
      {6, "multiplexing enables key at short cutoffs", multiplexing},
      {7, "Meas-B insensitive to cutoff", meas_b_cutoff_insensitivity},
      {8, "yield decreases with N, flattening", n_scaling},
      {9, "bipartite baseline divides by N-1", bipartite_identity},
      {10, "determinism across runs and workers", determinism},
  };

  int failed = 0, evaluated = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++evaluated;
    failed += o.pass ? 0 : 1;
    std::printf("%s  criterion %2d  %-52s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", evaluated - failed, evaluated);
  return failed;
}
