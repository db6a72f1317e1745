#include "ghzswitch/link_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "ghzswitch/rng.h"

namespace ghzswitch {

void LinkParams::validate() const {
  if (!(length_km >= 0.0)) throw std::invalid_argument("link length must be >= 0");
  if (!(p_link > 0.0 && p_link <= 1.0)) throw std::invalid_argument("P_link must lie in (0, 1]");
  if (!(t_prep > 0.0)) throw std::invalid_argument("T_P must be > 0");
  if (!(l_att_km > 0.0)) throw std::invalid_argument("L_att must be > 0");
  if (!(c_m_per_s > 0.0)) throw std::invalid_argument("signal speed must be > 0");
  if (!(p_dark >= 0.0 && p_dark < 1.0)) throw std::invalid_argument("P_D must lie in [0, 1)");
}

std::string ScenarioKind::name() const {
  return std::string(goal == Goal::kDistribute ? "Dis" : "Meas") + "-" + source_name();
}

std::string ScenarioKind::goal_name() const { return goal == Goal::kDistribute ? "Distribute" : "Measure"; }

std::string ScenarioKind::source_name() const { return source == SourceLocation::kClient ? "B" : "C"; }

ScenarioKind ScenarioKind::parse(const std::string& text) {
  std::string t;
  for (char ch : text) t.push_back(ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (t == "dis-c" || t == "distribute-c") return {Goal::kDistribute, SourceLocation::kCentral};
  if (t == "dis-b" || t == "distribute-b") return {Goal::kDistribute, SourceLocation::kClient};
  if (t == "meas-c" || t == "measure-c") return {Goal::kMeasure, SourceLocation::kCentral};
  if (t == "meas-b" || t == "measure-b") return {Goal::kMeasure, SourceLocation::kClient};
  throw std::invalid_argument("unknown scenario '" + text + "' (expected Dis-C, Dis-B, Meas-C or Meas-B)");
}

double channel_transmittance(double length_km, double l_att_km) {
  if (!(length_km >= 0.0)) throw std::invalid_argument("channel_transmittance: length must be >= 0");
  if (!(l_att_km > 0.0)) throw std::invalid_argument("channel_transmittance: L_att must be > 0");
  return std::exp(-length_km / l_att_km);
}

double effective_success(double eta, double p_dark) {
  const double miss = 1.0 - p_dark;
  return 1.0 - (1.0 - eta) * miss * miss;
}

double alpha(double eta, double p_dark) {
  const double eff = effective_success(eta, p_dark);
  if (!(eff > 0.0)) throw std::domain_error("alpha: undefined when eta = 0 and P_D = 0");
  return eta * (1.0 - p_dark) / eff;
}

double link_efficiency(const LinkParams& link) {
  return link.p_link * channel_transmittance(link.length_km, link.l_att_km);
}

TrialTiming timing_for(const ScenarioKind& kind, const LinkParams& link) {
  const double delay = link.one_way_delay();
  const double round_trip = 2.0 * delay;
  const bool central_source = kind.source == SourceLocation::kCentral;
  if (kind.goal == Goal::kDistribute) {
    if (central_source) return {link.t_prep + round_trip, round_trip, delay, 0.0};
    return {link.t_prep + round_trip, 0.0, delay, -delay};
  }
  if (central_source) return {link.t_prep + round_trip, round_trip, 0.0, 0.0};
  return {link.t_prep, 0.0, 0.0, 0.0};
}

std::uint64_t sample_trial_count(RandomStream& rng, double eta_eff) {
  if (!(eta_eff > 0.0 && eta_eff <= 1.0)) {
    throw std::invalid_argument("sample_trial_count: success probability must lie in (0, 1]");
  }
  if (eta_eff == 1.0) return 1;
  const double u = 1.0 - rng.uniform();  // (0, 1]
  const double k = std::ceil(std::log(u) / std::log1p(-eta_eff));
  if (!(k >= 1.0)) return 1;
  if (k >= 0x1.0p63) return std::uint64_t{1} << 63;
  return static_cast<std::uint64_t>(k);
}

}  // namespace ghzswitch
