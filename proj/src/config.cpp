#include "ghzswitch/config.h"

#include <yaml-cpp/yaml.h>

#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace ghzswitch {

namespace {

using Setter = std::function<void(SweepSpec&, const YAML::Node&, const std::string&)>;

struct Key {
  Setter set;
  bool sweepable;
};

double as_double(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a number");
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected a number, got '" + node.Scalar() + "'");
  }
}

std::int64_t as_int(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected an integer");
  try {
    return node.as<std::int64_t>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected an integer, got '" + node.Scalar() + "'");
  }
}

std::uint64_t as_uint(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected a non-negative integer");
  try {
    return node.as<std::uint64_t>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected a non-negative integer, got '" + node.Scalar() + "'");
  }
}

bool as_bool(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) throw ConfigError(path, "expected true or false");
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected true or false, got '" + node.Scalar() + "'");
  }
}

bool is_none(const YAML::Node& node) {
  if (node.IsNull()) return true;
  return node.IsScalar() && (node.Scalar() == "none" || node.Scalar() == "None");
}

int int_at_least(const YAML::Node& node, const std::string& path, int lo) {
  const std::int64_t v = as_int(node, path);
  if (v < lo || v > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "must be an integer >= " + std::to_string(lo));
  }
  return static_cast<int>(v);
}

std::uint64_t count_at_least_one(const YAML::Node& node, const std::string& path) {
  const std::uint64_t v = as_uint(node, path);
  if (v < 1) throw ConfigError(path, "must be >= 1");
  return v;
}

double non_negative(const YAML::Node& node, const std::string& path) {
  const double v = as_double(node, path);
  if (!(v >= 0.0 && v < std::numeric_limits<double>::infinity())) {
    throw ConfigError(path, "must be a finite number >= 0");
  }
  return v;
}

double positive(const YAML::Node& node, const std::string& path) {
  const double v = as_double(node, path);
  if (!(v > 0.0 && v < std::numeric_limits<double>::infinity())) {
    throw ConfigError(path, "must be a finite number > 0");
  }
  return v;
}

double in_range(const YAML::Node& node, const std::string& path, double lo, bool lo_open, double hi, bool hi_open) {
  const double v = as_double(node, path);
  const bool lo_ok = lo_open ? v > lo : v >= lo;
  const bool hi_ok = hi_open ? v < hi : v <= hi;
  if (!(lo_ok && hi_ok)) {
    std::ostringstream msg;
    msg << "must lie in " << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
    throw ConfigError(path, msg.str());
  }
  return v;
}

const std::map<std::string, Key>& registry() {
  static const std::map<std::string, Key> keys = {
      {"scenario",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) {
          if (!n.IsScalar()) throw ConfigError(p, "expected a scenario name");
          try {
            s.base.kind = ScenarioKind::parse(n.Scalar());
          } catch (const std::invalid_argument& e) {
            throw ConfigError(p, e.what());
          }
        },
        true}},
      {"parties", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.parties = int_at_least(n, p, 2); }, true}},
      {"memories", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.memories = int_at_least(n, p, 1); }, true}},
      {"dealer", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.dealer = int_at_least(n, p, 1); }, true}},
      {"t_cut_s",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) {
          if (is_none(n)) {
            s.base.t_cut.reset();
          } else {
            s.base.t_cut = positive(n, p);
          }
        },
        true}},
      {"geometry.l_km", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.geometry.l_km = non_negative(n, p); }, true}},
      {"geometry.l_B1_km", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.geometry.l_b1_km = non_negative(n, p); }, true}},
      {"geometry.l_B_km", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.geometry.l_b_km = non_negative(n, p); }, true}},
      {"geometry.lengths_km",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) {
          if (!n.IsSequence() || n.size() == 0) throw ConfigError(p, "expected a non-empty list of lengths");
          std::vector<double> v;
          for (std::size_t i = 0; i < n.size(); ++i) v.push_back(non_negative(n[i], p + "[" + std::to_string(i) + "]"));
          s.base.geometry.lengths_km = std::move(v);
        },
        true}},
      {"noise.F_init", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.noise.f_init = in_range(n, p, 0.25, false, 1.0, false); }, true}},
      {"noise.T_dp_s", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.noise.t_dp = positive(n, p); }, true}},
      {"noise.P_D", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.noise.p_dark = in_range(n, p, 0.0, false, 1.0, true); }, true}},
      {"link.P_link", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.p_link = in_range(n, p, 0.0, true, 1.0, false); }, true}},
      {"link.T_P_s", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.t_prep = positive(n, p); }, true}},
      {"link.L_att_km", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.l_att_km = positive(n, p); }, true}},
      {"link.c_m_per_s", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.c_m_per_s = positive(n, p); }, true}},
      {"run.samples", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.n_samples = count_at_least_one(n, p); }, false}},
      {"run.seed", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.seed = as_uint(n, p); }, false}},
      {"run.workers", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.workers = count_at_least_one(n, p); }, false}},
      {"run.chunks", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.chunks = count_at_least_one(n, p); }, false}},
      {"run.max_grid_points", {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.max_grid_points = count_at_least_one(n, p); }, false}},
      {"run.max_events_per_sample",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.max_events_per_sample = count_at_least_one(n, p); }, false}},
      {"run.dephase_during_broadcast",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) { s.base.dephase_during_broadcast = as_bool(n, p); }, false}},
      {"run.backend",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) {
          const std::string v = n.IsScalar() ? n.Scalar() : "";
          if (v == "ghz-diagonal") {
            s.base.backend = StateBackend::kGhzDiagonal;
          } else if (v == "dense") {
            s.base.backend = StateBackend::kDense;
          } else {
            throw ConfigError(p, "expected ghz-diagonal or dense");
          }
        },
        false}},
      {"run.bipartite_baseline_parties",
       {[](SweepSpec& s, const YAML::Node& n, const std::string& p) {
          if (is_none(n)) {
            s.bipartite_baseline_parties.reset();
          } else {
            s.bipartite_baseline_parties = int_at_least(n, p, 2);
          }
        },
        false}},
  };
  return keys;
}

const Key& lookup(const std::string& path) {
  const auto it = registry().find(path);
  if (it == registry().end()) throw ConfigError(path, "unknown key");
  return it->second;
}

void apply_section(SweepSpec& spec, const YAML::Node& map, const std::string& prefix) {
  for (const auto& entry : map) {
    const std::string key = entry.first.as<std::string>();
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (key == "sweep" && prefix.empty()) continue;
    // a section is a map whose key is not itself a leaf
    if (entry.second.IsMap() && registry().count(path) == 0) {
      apply_section(spec, entry.second, path);
      continue;
    }
    lookup(path).set(spec, entry.second, path);
  }
}

std::string node_text(const YAML::Node& node) {
  YAML::Emitter out;
  out.SetSeqFormat(YAML::Flow);
  out.SetMapFormat(YAML::Flow);
  out << node;
  return out.c_str();
}

YAML::Node load(const std::string& text, const std::string& what) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(what, std::string("malformed document: ") + e.what());
  }
}

ScenarioParams with_axis_value(const SweepSpec& spec, const SweepAxis& axis, std::size_t value_index) {
  SweepSpec copy = spec;
  const std::string path = "sweep." + axis.path + "[" + std::to_string(value_index) + "]";
  lookup(axis.path).set(copy, load(axis.values.at(value_index), path), path);
  return copy.base;
}

void check_point(const SweepSpec& spec, std::size_t index) {
  try {
    spec.point(index).to_protocol_config();
  } catch (const ConfigError& e) {
    if (spec.axes.empty()) throw;
    throw ConfigError(e.path(), std::string(e.what()) + " (at grid point " + std::to_string(index) + ")");
  }
}

}  // namespace

std::vector<double> Geometry::lengths(int parties, int dealer) const {
  const int forms = (l_km ? 1 : 0) + ((l_b1_km || l_b_km) ? 1 : 0) + (lengths_km ? 1 : 0);
  if (forms == 0) throw ConfigError("geometry", "give one of l_km, l_B1_km with l_B_km, or lengths_km");
  if (forms > 1) throw ConfigError("geometry", "l_km, l_B1_km/l_B_km and lengths_km are mutually exclusive");
  if (l_km) return std::vector<double>(static_cast<std::size_t>(parties), *l_km);
  if (l_b1_km || l_b_km) {
    if (!l_b1_km) throw ConfigError("geometry.l_B1_km", "required together with l_B_km");
    if (!l_b_km) throw ConfigError("geometry.l_B_km", "required together with l_B1_km");
    std::vector<double> v(static_cast<std::size_t>(parties), *l_b_km);
    v.at(static_cast<std::size_t>(dealer - 1)) = *l_b1_km;
    return v;
  }
  if (lengths_km->size() != static_cast<std::size_t>(parties)) {
    throw ConfigError("geometry.lengths_km", "expected " + std::to_string(parties) + " lengths, got " +
                                                 std::to_string(lengths_km->size()));
  }
  return *lengths_km;
}

ProtocolConfig ScenarioParams::to_protocol_config() const {
  if (dealer > parties) throw ConfigError("dealer", "must not exceed parties (" + std::to_string(parties) + ")");
  ProtocolConfig c;
  c.parties = parties;
  c.memories = memories;
  c.kind = kind;
  c.noise = noise;
  c.t_cut = t_cut;
  c.dealer = dealer;
  c.dephase_during_broadcast = dephase_during_broadcast;
  c.backend = backend;
  c.max_events_per_sample = max_events_per_sample;
  for (double l : geometry.lengths(parties, dealer)) {
    LinkParams link;
    link.length_km = l;
    link.p_link = p_link;
    link.t_prep = t_prep;
    link.l_att_km = l_att_km;
    link.c_m_per_s = c_m_per_s;
    link.p_dark = noise.p_dark;
    c.links.push_back(link);
  }
  c.validate();
  return c;
}

std::size_t SweepSpec::grid_size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

ScenarioParams SweepSpec::point(std::size_t index) const {
  if (index >= grid_size()) throw std::out_of_range("grid index out of range");
  SweepSpec copy = *this;
  std::size_t stride = grid_size();
  for (const auto& axis : axes) {
    stride /= axis.values.size();
    const std::size_t k = (index / stride) % axis.values.size();
    copy.base = with_axis_value(copy, axis, k);
  }
  return copy.base;
}

SweepSpec parse_config(const std::string& text) {
  const YAML::Node root = load(text, "<document>");
  SweepSpec spec;
  if (root.IsNull()) throw ConfigError("<document>", "empty document");
  if (!root.IsMap()) throw ConfigError("<document>", "expected a mapping at the top level");
  apply_section(spec, root, "");

  if (const YAML::Node sweep = root["sweep"]) {
    if (!sweep.IsMap()) throw ConfigError("sweep", "expected a mapping from parameter path to value list");
    for (const auto& entry : sweep) {
      SweepAxis axis;
      axis.path = entry.first.as<std::string>();
      const std::string path = "sweep." + axis.path;
      const auto it = registry().find(axis.path);
      if (it == registry().end()) throw ConfigError(path, "unknown parameter");
      if (!it->second.sweepable) throw ConfigError(path, "parameter cannot be swept");
      if (!entry.second.IsSequence() || entry.second.size() == 0) {
        throw ConfigError(path, "expected a non-empty list of values");
      }
      for (const auto& v : entry.second) axis.values.push_back(node_text(v));
      for (std::size_t i = 0; i < axis.values.size(); ++i) with_axis_value(spec, axis, i);
      spec.axes.push_back(std::move(axis));
    }
  }

  std::size_t size = 1;
  for (const auto& axis : spec.axes) {
    if (size > spec.max_grid_points / axis.values.size()) {
      throw ConfigError("sweep", "grid exceeds run.max_grid_points = " + std::to_string(spec.max_grid_points));
    }
    size *= axis.values.size();
  }
  for (std::size_t i = 0; i < size; ++i) check_point(spec, i);
  return spec;
}

std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root = load(text, "<document>");
  if (!root.IsMap()) throw ConfigError("<document>", "expected a mapping at the top level");
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(item, "override must have the form key=value");
    const std::string path = item.substr(0, eq);
    const YAML::Node value = load(item.substr(eq + 1), path);

    std::vector<std::string> parts;
    std::string rest = path;
    if (rest.rfind("sweep.", 0) == 0) {
      // axis names are dotted themselves
      parts = {"sweep", rest.substr(6)};
    } else {
      std::size_t start = 0;
      for (std::size_t dot; (dot = rest.find('.', start)) != std::string::npos; start = dot + 1) {
        parts.push_back(rest.substr(start, dot - start));
      }
      parts.push_back(rest.substr(start));
    }
    YAML::Node node = root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!node[parts[i]] || !node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
      node.reset(node[parts[i]]);
    }
    node[parts.back()] = value;
  }
  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

std::vector<std::string> sweepable_parameters() {
  std::vector<std::string> names;
  for (const auto& [name, key] : registry()) {
    if (key.sweepable) names.push_back(name);
  }
  return names;
}

}  // namespace ghzswitch
