#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzswitch/protocol.h"

namespace ghzswitch {

/// Validation failure in a configuration document. `path()` is the dotted
/// key path of the offending entry, e.g. "noise.T_dp_s" or "sweep.t_cut_s[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Link lengths of the star. Exactly one form must be given: a common
/// length, a bottleneck (dealer link plus a common length for the rest), or
/// an explicit list in party order.
struct Geometry {
  std::optional<double> l_km;
  std::optional<double> l_b1_km;
  std::optional<double> l_b_km;
  std::optional<std::vector<double>> lengths_km;

  /// Throws ConfigError when the form is ambiguous or incomplete.
  std::vector<double> lengths(int parties, int dealer) const;
};

/// Flat, human-facing description of one simulation point.
struct ScenarioParams {
  ScenarioKind kind;
  int parties = 4;
  int memories = 1;
  int dealer = 1;
  Geometry geometry;
  std::optional<double> t_cut;
  NoiseParams noise;
  double p_link = 1.0;
  double t_prep = 1e-6;
  double l_att_km = 22.0;
  double c_m_per_s = 2e8;
  bool dephase_during_broadcast = false;
  StateBackend backend = StateBackend::kGhzDiagonal;
  std::uint64_t max_events_per_sample = 10'000'000;

  ProtocolConfig to_protocol_config() const;
};

struct SweepAxis {
  std::string path;                 // e.g. "geometry.l_km"
  std::vector<std::string> values;  // each a YAML scalar or flow sequence
};

struct SweepSpec {
  ScenarioParams base;
  std::vector<SweepAxis> axes;
  std::uint64_t n_samples = 100'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t chunks = 1;
  std::size_t max_grid_points = 100'000;
  /// When set, reported key rates are divided by (value - 1) network uses.
  std::optional<int> bipartite_baseline_parties;

  std::size_t grid_size() const;
  /// Parameters of grid point `index`; the first axis varies slowest.
  ScenarioParams point(std::size_t index) const;
};

/// Parses and validates a configuration document (YAML). Throws ConfigError.
SweepSpec parse_config(const std::string& text);

/// Applies dotted-path overrides such as "noise.T_dp_s=0.5" or
/// "sweep.geometry.l_km=[50, 100]" to a document and returns the new text.
std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides);

/// Names accepted as sweep axes.
std::vector<std::string> sweepable_parameters();

}  // namespace ghzswitch
