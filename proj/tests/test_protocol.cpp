#include <cmath>
#include <functional>
#include <limits>

#include "doctest.h"
#include "ghzswitch/batch.h"
#include "ghzswitch/keyrate.h"
#include "ghzswitch/protocol.h"
#include "oracle.h"

using namespace ghzswitch;

namespace {

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

class ScriptedTrials final : public TrialCountSource {
 public:
  explicit ScriptedTrials(std::function<std::uint64_t(std::size_t, std::size_t)> fn) : fn_(std::move(fn)) {}
  std::uint64_t draw(std::size_t link, std::size_t slot, double) override { return fn_(link, slot); }

 private:
  std::function<std::uint64_t(std::size_t, std::size_t)> fn_;
};

MemorySlot slot(double established, double ready, bool occupied = true) { return {established, ready, occupied}; }

}  // namespace

TEST_SUITE("protocol-engine") {

TEST_CASE("config validation") {
  ProtocolConfig c = symmetric("Dis-C", 10, 3, 1);
  CHECK_NOTHROW(c.validate());
  c.links.pop_back();
  CHECK_THROWS(c.validate());
  c = symmetric("Dis-C", 10, 3, 1, 0.0);
  CHECK_THROWS(c.validate());
  c = symmetric("Dis-C", 10, 3, 0);
  CHECK_THROWS(c.validate());
  c = symmetric("Dis-C", 10, 3, 1);
  c.dealer = 4;
  CHECK_THROWS(c.validate());
}

TEST_CASE("noiseless two-party run yields a perfect Bell pair") {
  ProtocolConfig c = symmetric("Dis-C", 30, 2, 1);
  c.noise = {1.0, 1e9, 0.0};
  for (auto& l : c.links) l.p_dark = 0.0;
  GeometricTrials trials(3, 2, 1);
  const SampleRecord r = run_one_ghz(c, trials);
  CHECK(r.density_matrix().max_abs_diff(DensityMatrix::ghz(client_labels(2))) < 1e-9);
  CHECK(r.state.fidelity() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("forced first-trial success gives the closed-form X error") {
  const double l = 40.0;
  ProtocolConfig c = symmetric("Dis-C", l, 4, 1);
  c.noise = {1.0, 0.5, 0.0};
  for (auto& link : c.links) link.p_dark = 0.0;
  ScriptedTrials always_one([](std::size_t, std::size_t) { return 1; });
  SwitchSimulator sim(c, always_one);

  const double one_way = l * 1e3 / 2e8;
  const double t_trial = 1e-6 + 2 * one_way;
  const double lc = 0.5 * (1 - std::exp(-2 * one_way / 0.5));
  const double lb = 0.5 * (1 - std::exp(-one_way / 0.5));
  const double product = std::pow((1 - 2 * lc) * (1 - 2 * lb), 4);
  for (int i = 1; i <= 3; ++i) {
    const SampleRecord r = sim.next();
    CHECK(r.completed_at == doctest::Approx(i * t_trial).epsilon(1e-12));
    for (const auto& st : r.storage) {
      CHECK(st.central == doctest::Approx(2 * one_way).epsilon(1e-9));
      CHECK(st.client == doctest::Approx(one_way).epsilon(1e-9));
    }
    CHECK(qber_x(r.density_matrix()) == doctest::Approx((1 - product) / 2).epsilon(1e-12));
    CHECK(qber_z(r.density_matrix(), 3) == doctest::Approx(0.0));
  }
}

TEST_CASE("forced first-trial success with link noise matches per-pair error rates") {
  const double l = 60.0;
  ProtocolConfig c = symmetric("Meas-C", l, 3, 1);
  ScriptedTrials always_one([](std::size_t, std::size_t) { return 1; });
  const SampleRecord r = run_one_ghz(c, always_one);

  const double eta = std::exp(-l / 22.0), pd = 1e-6;
  const double a = eta * (1 - pd) / (eta + (1 - eta) * pd * (2 - pd));
  const double lambda = 0.5 * (1 - std::exp(-2 * l * 1e3 / 2e8));
  // phase and bit error probability of one pair, step by step
  double phase = 2.0 * (1 - 0.99) / 3, bit = phase;
  phase = a * phase + (1 - a) / 2;
  bit = a * bit + (1 - a) / 2;
  phase = phase * (1 - lambda) + (1 - phase) * lambda;
  CHECK(qber_x(r.density_matrix()) == doctest::Approx((1 - std::pow(1 - 2 * phase, 3)) / 2).epsilon(1e-12));
  CHECK(qber_z(r.density_matrix(), 2) == doctest::Approx((1 - std::pow(1 - 2 * bit, 2)) / 2).epsilon(1e-12));
  for (const auto& st : r.storage) CHECK(st.client == 0.0);
}

TEST_CASE("unsatisfiable cutoff is reported") {
  const ProtocolConfig c = symmetric("Dis-C", 100, 2, 1, 0.5e-3);
  GeometricTrials trials(1, 2, 1);
  CHECK_THROWS_AS(SwitchSimulator(c, trials), CutoffUnsatisfiable);
  CHECK_THROWS_AS(run_batch(c, 10, 1), CutoffUnsatisfiable);
}

TEST_CASE("event budget guard") {
  ProtocolConfig c = symmetric("Dis-C", 200, 4, 1, 3e-3);
  c.max_events_per_sample = 100;
  CHECK_THROWS_AS(run_batch(c, 5, 1), EventBudgetExceeded);
}

TEST_CASE("enforce_cutoff") {
  std::vector<MemorySlot> slots{slot(0.0, 0.0), slot(0.5, 0.5)};
  CHECK(enforce_cutoff(slots, 0.6, 0.7).empty());

  slots = {slot(1.0, 1.0)};
  CHECK(enforce_cutoff(slots, 1.3, 0.3).empty());
  CHECK(slots[0].occupied);

  slots = {slot(0.8, 0.8), slot(0.6, 0.6)};
  const auto freed = enforce_cutoff(slots, 1.0, 0.3);
  REQUIRE(freed.size() == 1);
  CHECK(freed[0] == 1);
  CHECK(slots[0].occupied);
  CHECK_FALSE(slots[1].occupied);
}

TEST_CASE("select_newest") {
  CHECK(select_newest({slot(0.2, 0.3)}, 1.0) == 0);
  CHECK(select_newest({slot(1.0, 1.0), slot(2.0, 2.0), slot(1.5, 1.5)}, 3.0) == 1);
  CHECK(select_newest({slot(1.0, 1.0), slot(1.0, 1.0)}, 3.0) == 0);
  CHECK(select_newest({slot(1.0, 1.0), slot(2.0, 4.0)}, 3.0) == 0);
  CHECK(select_newest({slot(1.0, 1.0), slot(2.0, 2.0, false)}, 3.0) == 0);
  CHECK(select_newest({slot(1.0, 1.0), slot(2.5, 2.5)}, 3.0, 1.0) == 1);
  CHECK_THROWS_AS(select_newest({slot(1.0, 1.0)}, 3.0, 1.0), std::logic_error);
}

TEST_CASE("single-sample batch") {
  const ProtocolConfig c = symmetric("Dis-C", 50, 3, 1);
  GeometricTrials trials(17, 3, 1);
  const SampleRecord r = run_one_ghz(c, trials);
  const RunStatistics s = run_batch(c, 1, 17);
  CHECK(s.n_samples == 1);
  CHECK(s.yield_per_second == doctest::Approx(1.0 / r.completed_at).epsilon(1e-14));
  CHECK(s.mean_ghz.to_density_matrix().max_abs_diff(r.density_matrix()) < 1e-14);
}

TEST_CASE("yield matches the maximum-of-geometrics oracle") {
  const ProtocolConfig c = symmetric("Dis-C", 70, 4, 1);
  const RunStatistics s = run_batch(c, 10'000, 5);
  const double eta_eff = effective_success(std::exp(-70.0 / 22.0), 1e-6);
  const double t_trial = 1e-6 + 2 * 70e3 / 2e8;
  const double expected = 1.0 / (t_trial * oracle::expected_max_geometric(4, eta_eff));
  CAPTURE(s.yield_per_second);
  CAPTURE(expected);
  CHECK(std::abs(s.yield_per_second - expected) < 3 * s.yield_stderr);
}

TEST_CASE("independent seeds agree statistically") {
  const ProtocolConfig c = symmetric("Dis-C", 80, 4, 1);
  const RunStatistics a = run_batch(c, 5000, 1), b = run_batch(c, 5000, 2);
  CHECK(std::abs(a.q_x - b.q_x) < 5 * std::hypot(a.stderr_q_x, b.stderr_q_x));
  CHECK(a.q_x != b.q_x);
}

TEST_CASE("identical inputs reproduce identical statistics") {
  const ProtocolConfig c = symmetric("Dis-B", 90, 3, 3, 0.05);
  const RunStatistics a = run_batch(c, 2000, 9), b = run_batch(c, 2000, 9);
  CHECK(a.yield_per_second == b.yield_per_second);
  CHECK(a.q_x == b.q_x);
  CHECK(a.q_z == b.q_z);
  CHECK(a.key_rate_raw == b.key_rate_raw);
  CHECK(a.discards == b.discards);
  CHECK(a.mean_ghz.weights() == b.mean_ghz.weights());
}

TEST_CASE("completion clock") {
  for (int m : {1, 4}) {
    const ProtocolConfig c = symmetric("Meas-C", 60, 4, m, 0.02);
    GeometricTrials trials(4, 4, static_cast<std::size_t>(m));
    SwitchSimulator sim(c, trials);
    double previous = 0.0;
    for (int i = 0; i < 3000; ++i) {
      const SampleRecord r = sim.next();
      if (m == 1) {
        CHECK(r.completed_at > previous);
      } else {
        CHECK(r.completed_at >= previous);
      }
      previous = r.completed_at;
    }
  }
}

TEST_CASE("selected pairs respect the cutoff") {
  for (const char* kind : {"Dis-C", "Dis-B", "Meas-C", "Meas-B"}) {
    const double t_cut = 0.01;
    const ProtocolConfig c = symmetric(kind, 120, 3, 2, t_cut);
    GeometricTrials trials(8, 3, 2);
    SwitchSimulator sim(c, trials);
    std::uint64_t discards = 0;
    for (int i = 0; i < 300; ++i) {
      const SampleRecord r = sim.next();
      discards += r.discards;
      for (const auto& st : r.storage) CHECK(st.central <= t_cut * (1 + 1e-12));
      if (c.kind.goal == Goal::kMeasure) {
        for (const auto& st : r.storage) CHECK(st.client == 0.0);
      }
    }
    CAPTURE(kind);
    // Meas-B trials take 1 us, so nothing ever gets close to the cutoff
    if (std::string(kind) != "Meas-B") CHECK(discards > 0);
  }
}

TEST_CASE("broadcast dephasing adds the one-way delay") {
  ProtocolConfig c = symmetric("Dis-C", 40, 2, 1);
  ScriptedTrials always_one([](std::size_t, std::size_t) { return 1; });
  const SampleRecord off = run_one_ghz(c, always_one);
  c.dephase_during_broadcast = true;
  const SampleRecord on = run_one_ghz(c, always_one);
  CHECK(on.storage[0].client - off.storage[0].client == doctest::Approx(40e3 / 2e8).epsilon(1e-9));
  CHECK(on.state.fidelity() < off.state.fidelity());
}

TEST_CASE("unused slots keep their age across merges") {
  // link 0: slot 0 ready at 2 us, slot 1 at 1 us; link 1 ready at 3 us, then 6 us
  ProtocolConfig c = symmetric("Meas-B", 10, 2, 2);
  c.noise.t_dp = 1e-5;
  std::vector<int> calls(4, 0);
  ScriptedTrials scripted([&](std::size_t link, std::size_t s) -> std::uint64_t {
    const int n = calls[link * 2 + s]++;
    if (link == 0) return n == 0 ? (s == 0 ? 2 : 1) : 1000;
    return s == 0 ? 3 : 1000;
  });
  SwitchSimulator sim(c, scripted);
  const SampleRecord first = sim.next();
  CHECK(first.completed_at == doctest::Approx(3e-6));
  CHECK(first.storage[0].central == doctest::Approx(1e-6));  // slot 0 (t = 2 us) is newest
  const SampleRecord second = sim.next();
  CHECK(second.completed_at == doctest::Approx(6e-6));
  CHECK(second.storage[0].central == doctest::Approx(5e-6));  // slot 1, held since 1 us
}

TEST_CASE("dealer position reorders the parties") {
  ProtocolConfig c = symmetric("Dis-C", 20, 3, 1);
  c.links[2].length_km = 90;
  c.dealer = 3;
  ScriptedTrials always_one([](std::size_t, std::size_t) { return 1; });
  SwitchSimulator sim(c, always_one);
  CHECK(sim.timing(0).t_c == doctest::Approx(2 * 90e3 / 2e8));
  const SampleRecord r = sim.next();
  CHECK(r.completed_at == doctest::Approx(1e-6 + 2 * 90e3 / 2e8));
}

TEST_CASE("dense and GHZ-diagonal backends agree on the same sample path") {
  for (const char* kind : {"Dis-C", "Dis-B", "Meas-C", "Meas-B"}) {
    ProtocolConfig fast = symmetric(kind, 70, 3, 2, 0.05);
    fast.noise.t_dp = 0.05;
    ProtocolConfig dense = fast;
    dense.backend = StateBackend::kDense;
    GeometricTrials ta(21, 3, 2), tb(21, 3, 2);
    SwitchSimulator a(fast, ta), b(dense, tb);
    for (int i = 0; i < 40; ++i) {
      const SampleRecord ra = a.next(), rb = b.next();
      CHECK(ra.completed_at == rb.completed_at);
      CHECK(ra.density_matrix().max_abs_diff(rb.density_matrix()) < 1e-12);
    }
  }
}

TEST_CASE("more memories never hurt") {
  for (const char* kind : {"Dis-C", "Meas-C"}) {
    const ProtocolConfig one = symmetric(kind, 100, 4, 1, 0.1);
    const ProtocolConfig five = symmetric(kind, 100, 4, 5, 0.1);
    const RunStatistics s1 = run_batch(one, 4000, 3), s5 = run_batch(five, 4000, 3);
    CAPTURE(kind);
    CHECK(s5.yield_per_second >= s1.yield_per_second - 3 * std::hypot(s1.yield_stderr, s5.yield_stderr));
    CHECK(s5.q_x <= s1.q_x + 3 * std::hypot(s1.stderr_q_x, s5.stderr_q_x));
  }
}

TEST_CASE("batch split is independent of the worker count") {
  const ProtocolConfig c = symmetric("Dis-C", 60, 3, 2, 0.02);
  const RunStatistics w1 = run_batch_split(c, 3001, 77, 4, 1);
  const RunStatistics w4 = run_batch_split(c, 3001, 77, 4, 4);
  CHECK(w1.n_samples == 3001);
  CHECK(w1.yield_per_second == w4.yield_per_second);
  CHECK(w1.q_x == w4.q_x);
  CHECK(w1.stderr_q_x == w4.stderr_q_x);
  CHECK(w1.key_rate_raw == w4.key_rate_raw);
  CHECK(run_batch_split(c, 500, 77, 1, 3).q_x == run_batch(c, 500, 77).q_x);
}

TEST_CASE("merged accumulators equal one long accumulator") {
  RunningMoments all, left, right;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 0.37) * 3 + i * 0.01;
    all.add(x);
    (i < 37 ? left : right).add(x);
  }
  left.merge(right);
  CHECK(left.n == all.n);
  CHECK(left.mean == doctest::Approx(all.mean).epsilon(1e-13));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

}  // TEST_SUITE
