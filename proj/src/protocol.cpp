#include "ghzswitch/protocol.h"

#include <cmath>
#include <limits>
#include <string>

#include "ghzswitch/merge.h"

namespace ghzswitch {

void ProtocolConfig::validate() const {
  if (parties < 2) throw std::invalid_argument("parties must be >= 2");
  if (memories < 1) throw std::invalid_argument("memories must be >= 1");
  if (links.size() != static_cast<std::size_t>(parties)) {
    throw std::invalid_argument("expected " + std::to_string(parties) + " links, got " +
                                std::to_string(links.size()));
  }
  for (const auto& link : links) link.validate();
  noise.validate();
  if (t_cut && !(*t_cut > 0.0)) throw std::invalid_argument("t_cut must be > 0");
  if (dealer < 1 || dealer > parties) throw std::invalid_argument("dealer must be a party index in [1, N]");
  if (max_events_per_sample < 1) throw std::invalid_argument("max_events_per_sample must be >= 1");
}

std::vector<std::size_t> enforce_cutoff(std::vector<MemorySlot>& slots, double now, double t_cut) {
  std::vector<std::size_t> freed;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].occupied && now > slots[i].expires_at(t_cut)) {
      slots[i].occupied = false;
      freed.push_back(i);
    }
  }
  return freed;
}

std::size_t select_newest(const std::vector<MemorySlot>& slots, double now, std::optional<double> t_cut) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const MemorySlot& s = slots[i];
    if (!s.occupied || s.ready_at > now) continue;
    if (t_cut && now > s.expires_at(*t_cut)) continue;
    if (!best || s.established_at > slots[*best].established_at) best = i;
  }
  if (!best) throw std::logic_error("select_newest: no eligible slot");
  return *best;
}

GeometricTrials::GeometricTrials(std::uint64_t seed, std::size_t links, std::size_t slots_per_link)
    : slots_per_link_(slots_per_link) {
  streams_.reserve(links * slots_per_link);
  for (std::size_t l = 0; l < links; ++l) {
    for (std::size_t s = 0; s < slots_per_link; ++s) streams_.emplace_back(seed, l, s);
  }
}

std::uint64_t GeometricTrials::draw(std::size_t link, std::size_t slot, double eta_eff) {
  return sample_trial_count(streams_.at(link * slots_per_link_ + slot), eta_eff);
}

SwitchSimulator::SwitchSimulator(ProtocolConfig config, TrialCountSource& trials, double start_time)
    : config_(std::move(config)), trials_(trials), now_(start_time) {
  config_.validate();

  std::vector<std::size_t> order{static_cast<std::size_t>(config_.dealer - 1)};
  for (std::size_t i = 0; i < config_.links.size(); ++i) {
    if (i != order.front()) order.push_back(i);
  }
  for (std::size_t i : order) {
    Link link;
    link.params = config_.links[i];
    link.timing = timing_for(config_.kind, link.params);
    link.eta = link_efficiency(link.params);
    link.eta_eff = effective_success(link.eta, link.params.p_dark);
    if (!(link.eta_eff > 0.0)) {
      throw std::invalid_argument("link " + std::to_string(i + 1) + " can never succeed (eta_eff = 0)");
    }
    link.alpha = alpha(link.eta, link.params.p_dark);
    if (config_.t_cut && link.timing.t_c > *config_.t_cut) {
      throw CutoffUnsatisfiable("cutoff unsatisfiable: pairs on link " + std::to_string(i + 1) + " are " +
                                std::to_string(link.timing.t_c) + " s old when first usable, t_cut = " +
                                std::to_string(*config_.t_cut) + " s");
    }
    link.slots.resize(static_cast<std::size_t>(config_.memories));
    links_.push_back(std::move(link));
  }
  for (std::size_t l = 0; l < links_.size(); ++l) {
    for (std::size_t s = 0; s < links_[l].slots.size(); ++s) restart(l, s, start_time);
  }
}

void SwitchSimulator::restart(std::size_t link, std::size_t slot, double t_free) {
  Link& l = links_[link];
  const auto k = static_cast<double>(trials_.draw(link, slot, l.eta_eff));
  MemorySlot& s = l.slots[slot];
  s.ready_at = t_free + k * l.timing.t_trial + l.timing.ts_offset;
  s.established_at = s.ready_at - l.timing.t_c;
  s.occupied = false;
}

bool SwitchSimulator::merge_possible(double t) const {
  for (const Link& link : links_) {
    bool any = false;
    for (const MemorySlot& s : link.slots) {
      if (s.occupied && s.ready_at <= t && (!config_.t_cut || t <= s.expires_at(*config_.t_cut))) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

SampleRecord SwitchSimulator::next() {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::uint64_t events = 0;
  while (!merge_possible(now_)) {
    if (++events > config_.max_events_per_sample) {
      throw EventBudgetExceeded("sample did not complete within " +
                                std::to_string(config_.max_events_per_sample) + " events");
    }
    double t = kInf;
    for (const Link& link : links_) {
      for (const MemorySlot& s : link.slots) {
        if (!s.occupied) {
          t = std::min(t, s.ready_at);
        } else if (config_.t_cut) {
          t = std::min(t, s.expires_at(*config_.t_cut));
        }
      }
    }
    for (Link& link : links_) {
      for (MemorySlot& s : link.slots) {
        if (!s.occupied && s.ready_at <= t) s.occupied = true;
      }
    }
    now_ = t;
    if (merge_possible(t)) break;
    if (config_.t_cut) {
      // Slots expiring exactly at t stay usable at t but not beyond it.
      const double just_after = std::nextafter(t, kInf);
      for (std::size_t l = 0; l < links_.size(); ++l) {
        for (std::size_t idx : enforce_cutoff(links_[l].slots, just_after, *config_.t_cut)) {
          ++discards_;
          restart(l, idx, links_[l].slots[idx].expires_at(*config_.t_cut));
        }
      }
    }
  }
  return merge_at(now_);
}

SampleRecord SwitchSimulator::merge_at(double t) {
  SampleRecord record;
  record.completed_at = t;
  record.discards = discards_;
  discards_ = 0;

  std::vector<PairErrorModel> pairs;
  std::vector<std::pair<double, double>> durations;
  for (std::size_t l = 0; l < links_.size(); ++l) {
    Link& link = links_[l];
    const std::size_t idx = select_newest(link.slots, t, config_.t_cut);
    const MemorySlot& s = link.slots[idx];
    PartyStorage st;
    st.central = t - s.established_at;
    if (config_.kind.goal == Goal::kDistribute) {
      st.client = t - s.ready_at + link.timing.t_b;
      if (config_.dephase_during_broadcast) st.client += link.params.one_way_delay();
    }
    record.storage.push_back(st);
    durations.emplace_back(st.central, st.client);
    pairs.push_back(PairErrorModel::bell_diagonal(config_.noise.f_init)
                        .depolarized(link.alpha)
                        .dephased(dephasing_lambda(st.central, config_.noise.t_dp))
                        .dephased(dephasing_lambda(st.client, config_.noise.t_dp)));
    restart(l, idx, t);
  }
  record.state = config_.backend == StateBackend::kDense ? dense_state(durations)
                                                          : GhzDiagonalState::from_pairs(pairs);
  return record;
}

GhzDiagonalState SwitchSimulator::dense_state(const std::vector<std::pair<double, double>>& durations) const {
  std::vector<DensityMatrix> pairs;
  for (std::size_t l = 0; l < links_.size(); ++l) {
    const auto party = static_cast<int>(l + 1);
    const QubitLabel client = QubitLabel::client(party), central = QubitLabel::central(party);
    DensityMatrix rho = bell_pair(config_.noise.f_init, client, central);
    // the detector sits on the receiving end of the fiber
    const QubitLabel received = config_.kind.source == SourceLocation::kCentral ? client : central;
    rho = apply_dark_count_mix(rho, received, links_[l].alpha);
    rho = apply_dephasing(rho, central, dephasing_lambda(durations[l].first, config_.noise.t_dp));
    rho = apply_dephasing(rho, client, dephasing_lambda(durations[l].second, config_.noise.t_dp));
    pairs.push_back(std::move(rho));
  }
  const DensityMatrix merged = merge_pairs(pairs);
  merged.check_valid();
  return GhzDiagonalState::from_density_matrix(merged);
}

SampleRecord run_one_ghz(const ProtocolConfig& config, TrialCountSource& trials, double start_time) {
  SwitchSimulator sim(config, trials, start_time);
  return sim.next();
}

}  // namespace ghzswitch
