#pragma once

#include <cstdint>
#include <string>

namespace ghzswitch {

class RandomStream;

/// Physical description of one client-to-center link.
struct LinkParams {
  double length_km = 0.0;
  double p_link = 1.0;         // lumped per-link efficiency, in (0, 1]
  double t_prep = 1e-6;        // source preparation time T_P in seconds
  double l_att_km = 22.0;      // fiber attenuation length
  double c_m_per_s = 2e8;      // signal speed in fiber
  double p_dark = 1e-6;        // dark-count probability, in [0, 1)

  void validate() const;
  double one_way_delay() const { return length_km * 1e3 / c_m_per_s; }
};

enum class Goal { kDistribute, kMeasure };
enum class SourceLocation { kClient, kCentral };

struct ScenarioKind {
  Goal goal = Goal::kDistribute;
  SourceLocation source = SourceLocation::kCentral;

  /// "Dis-C", "Meas-B", ...
  std::string name() const;
  std::string goal_name() const;    // "Distribute" / "Measure"
  std::string source_name() const;  // "B" / "C"

  /// Accepts "dis-c", "Dis-C", "meas_b", ... (case-insensitive, '-' or '_').
  static ScenarioKind parse(const std::string& text);

  friend bool operator==(const ScenarioKind&, const ScenarioKind&) = default;
};

/// Per-trial timing of one link: the trial duration, the noise already
/// accrued at the central station (t_c) and at the client (t_b) when the
/// pair becomes usable, and the readiness offset in t_s = k*t_trial + offset.
struct TrialTiming {
  double t_trial = 0.0;
  double t_c = 0.0;
  double t_b = 0.0;
  double ts_offset = 0.0;
};

/// e^{-l/L_att}
double channel_transmittance(double length_km, double l_att_km);

/// 1 - (1-eta)(1-P_D)^2: probability that a trial is heralded as a success.
double effective_success(double eta, double p_dark);

/// eta(1-P_D)/eta_eff: probability that a heralded pair is genuine.
double alpha(double eta, double p_dark);

/// P_link * e^{-l/L_att}
double link_efficiency(const LinkParams& link);

TrialTiming timing_for(const ScenarioKind& kind, const LinkParams& link);

/// Trials up to and including the first success, k ~ Geometric(eta_eff).
std::uint64_t sample_trial_count(RandomStream& rng, double eta_eff);

}  // namespace ghzswitch
