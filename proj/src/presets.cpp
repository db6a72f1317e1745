#include "ghzswitch/presets.h"

#include <cmath>
#include <functional>
#include <map>

#include "ghzswitch/results_io.h"

namespace ghzswitch {

namespace {

constexpr const char* kStandardLink = R"(noise:
  F_init: 0.99
  T_dp_s: 1
  P_D: 1.0e-6
link:
  P_link: 1
  T_P_s: 1.0e-6
  L_att_km: 22
  c_m_per_s: 2.0e+8
)";

std::string flow_list(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_double(values[i]);
  return out + "]";
}

std::vector<double> range(double from, double to, double step) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::lround((to - from) / step));
  for (int i = 0; i <= n; ++i) v.push_back(from + i * step);
  return v;
}

std::string distances() { return flow_list(range(10, 250, 10)); }
std::string long_links() { return flow_list(range(10, 200, 10)); }
std::string dephasing_times() { return flow_list(log_spaced(-2, 1, 10)); }

const std::map<std::string, std::function<std::string()>>& catalog() {
  static const std::map<std::string, std::function<std::string()>> presets = {
      {"sym-fig2",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: none\ngeometry:\n  l_km: 100\n") +
                kStandardLink +
                "sweep:\n  scenario: [Dis-C, Dis-B, Meas-C, Meas-B]\n  t_cut_s: [none, 0.3]\n  geometry.l_km: " +
                distances() + "\n";
       }},
      {"sym-fig3",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 5\nt_cut_s: none\ngeometry:\n  l_km: 100\n") +
                kStandardLink +
                "sweep:\n  scenario: [Dis-C, Dis-B, Meas-C, Meas-B]\n  t_cut_s: [none, 0.1]\n  geometry.l_km: " +
                distances() + "\n";
       }},
      {"cutoff-fig4",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: 0.1\ngeometry:\n  l_km: 150\n") +
                kStandardLink + "sweep:\n  scenario: [Dis-C, Dis-B, Meas-C, Meas-B]\n  memories: [1, 5]\n  t_cut_s: " +
                flow_list(log_spaced(-2, 0, 30)) + "\n";
       }},
      {"cutoff-distance",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: 0.1\ngeometry:\n  l_km: 100\n") +
                kStandardLink + "sweep:\n  scenario: [Dis-C, Meas-B]\n  t_cut_s: " +
                flow_list(log_spaced(-2, 0, 30)) + "\n  geometry.l_km: " + distances() + "\n";
       }},
      {"n-scaling-fig5",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: none\ngeometry:\n  l_km: 70\n") +
                kStandardLink +
                "run:\n  samples: 1000\nsweep:\n  memories: [1, 2, 3, 4, 5]\n  parties: [2, 3, 4, 5, 6, 7, 8, 9, 10]\n";
       }},
      {"bottleneck-fig6",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: none\ngeometry:\n  l_B1_km: 100\n  "
                            "l_B_km: 4\n") +
                kStandardLink + "sweep:\n  t_cut_s: [none, 0.03]\n  geometry.l_B1_km: " + long_links() +
                "\n  noise.T_dp_s: " + dephasing_times() + "\n";
       }},
      {"universities",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\ndealer: 1\nt_cut_s: none\ngeometry:\n  "
                            "lengths_km: [76, 31, 25, 27]\n") +
                kStandardLink + "sweep:\n  t_cut_s: [none, 0.1]\n  memories: " +
                flow_list(range(1, 20, 1)) + "\n  noise.T_dp_s: " + dephasing_times() + "\n";
       }},
      {"bottleneck-multi",
       [] {
         return std::string("scenario: Dis-C\nparties: 4\nmemories: 1\nt_cut_s: 0.05\ngeometry:\n  l_B1_km: 100\n  "
                            "l_B_km: 4\n") +
                kStandardLink + "sweep:\n  geometry.l_B1_km: " + long_links() + "\n  noise.T_dp_s: " +
                dephasing_times() + "\n";
       }},
      {"bottleneck-bipartite",
       [] {
         return std::string("scenario: Dis-C\nparties: 2\nmemories: 1\nt_cut_s: 0.015\ngeometry:\n  l_B1_km: 100\n  "
                            "l_B_km: 4\n") +
                kStandardLink + "run:\n  bipartite_baseline_parties: 4\nsweep:\n  geometry.l_B1_km: " +
                long_links() + "\n  noise.T_dp_s: " + dephasing_times() + "\n";
       }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, make] : catalog()) names.push_back(name);
  return names;
}

std::string preset_document(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw UnknownPreset("unknown preset '" + name + "'; available: " + list);
  }
  return it->second();
}

SweepSpec preset(const std::string& name) { return parse_config(preset_document(name)); }

std::vector<double> log_spaced(int lo, int hi, int per_decade) {
  if (hi < lo || per_decade < 1) throw std::invalid_argument("log_spaced: need lo <= hi and per_decade >= 1");
  std::vector<double> v;
  for (int i = 0; i <= (hi - lo) * per_decade; ++i) {
    v.push_back(std::pow(10.0, lo + static_cast<double>(i) / per_decade));
  }
  return v;
}

}  // namespace ghzswitch
