#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ghzswitch/channels.h"
#include "ghzswitch/ghz_diagonal.h"
#include "ghzswitch/link_model.h"
#include "ghzswitch/rng.h"

namespace ghzswitch {

/// How the per-sample client state is computed. Both produce identical
/// states; the dense path exists to cross-check the GHZ-diagonal one.
enum class StateBackend { kGhzDiagonal, kDense };

struct ProtocolConfig {
  int parties = 4;
  int memories = 1;
  ScenarioKind kind;
  std::vector<LinkParams> links;  // one entry per party, in party order
  NoiseParams noise;
  std::optional<double> t_cut;    // seconds; nullopt = no cutoff
  int dealer = 1;                 // 1-based party acting as B1
  /// Adds l_i/c of client-side dephasing in Distribute scenarios for the
  /// classical correction to reach each client.
  bool dephase_during_broadcast = false;
  StateBackend backend = StateBackend::kGhzDiagonal;
  std::uint64_t max_events_per_sample = 100'000'000;

  void validate() const;
};

/// No sample can ever complete: some link's pair is already older than the
/// cutoff when it first becomes usable.
class CutoffUnsatisfiable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sample exceeded ProtocolConfig::max_events_per_sample.
class EventBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MemorySlot {
  double established_at = 0.0;  // central qubit entered memory
  double ready_at = 0.0;        // central station may act on it
  bool occupied = false;

  double expires_at(double t_cut) const { return established_at + t_cut; }
};

/// Frees every occupied slot with now > established_at + t_cut and returns
/// the freed indices in ascending order.
std::vector<std::size_t> enforce_cutoff(std::vector<MemorySlot>& slots, double now, double t_cut);

/// Index of the eligible slot (occupied, ready, not expired) with the largest
/// established_at; ties go to the lowest index. Throws std::logic_error if
/// nothing is eligible.
std::size_t select_newest(const std::vector<MemorySlot>& slots, double now,
                          std::optional<double> t_cut = std::nullopt);

struct PartyStorage {
  double central = 0.0;  // seconds the central-station qubit spent dephasing
  double client = 0.0;   // seconds the client qubit spent dephasing
};

struct SampleRecord {
  GhzDiagonalState state;            // parties ordered dealer first
  double completed_at = 0.0;
  std::vector<PartyStorage> storage; // same party order as `state`
  std::uint64_t discards = 0;

  DensityMatrix density_matrix() const { return state.to_density_matrix(); }
};

/// Source of trial counts k for the attempt pipelines. Swappable so tests
/// can force deterministic outcomes.
class TrialCountSource {
 public:
  virtual ~TrialCountSource() = default;
  virtual std::uint64_t draw(std::size_t link, std::size_t slot, double eta_eff) = 0;
};

/// Geometric draws from one independent stream per (link, slot).
class GeometricTrials final : public TrialCountSource {
 public:
  GeometricTrials(std::uint64_t seed, std::size_t links, std::size_t slots_per_link);
  std::uint64_t draw(std::size_t link, std::size_t slot, double eta_eff) override;

 private:
  std::size_t slots_per_link_;
  std::vector<RandomStream> streams_;
};

/// Event-driven star switch. Each call to next() advances the shared clock
/// to the next merge and returns the resulting GHZ sample; memory slots and
/// their pipelines carry over between calls.
class SwitchSimulator {
 public:
  SwitchSimulator(ProtocolConfig config, TrialCountSource& trials, double start_time = 0.0);

  SampleRecord next();

  double now() const { return now_; }
  const ProtocolConfig& config() const { return config_; }
  const TrialTiming& timing(std::size_t link) const { return links_[link].timing; }

 private:
  struct Link {
    LinkParams params;
    TrialTiming timing;
    double eta = 0.0;
    double eta_eff = 0.0;
    double alpha = 1.0;
    std::vector<MemorySlot> slots;
  };

  void restart(std::size_t link, std::size_t slot, double t_free);
  bool merge_possible(double t) const;
  SampleRecord merge_at(double t);
  GhzDiagonalState dense_state(const std::vector<std::pair<double, double>>& durations) const;

  ProtocolConfig config_;
  TrialCountSource& trials_;
  std::vector<Link> links_;  // dealer first
  double now_ = 0.0;
  std::uint64_t discards_ = 0;
};

/// One GHZ sample from freshly initialized memories starting at start_time.
SampleRecord run_one_ghz(const ProtocolConfig& config, TrialCountSource& trials, double start_time = 0.0);

}  // namespace ghzswitch
