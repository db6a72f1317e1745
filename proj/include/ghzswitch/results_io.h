#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ghzswitch {

/// One grid point of a sweep. Statistics are NaN when `error` is set.
struct ResultRow {
  std::string scenario;
  std::string goal;
  std::string source;
  int parties = 0;
  int memories = 0;
  std::vector<double> lengths_km;
  std::optional<double> t_cut_s;
  double t_dp_s = 0.0;
  double f_init = 0.0;
  double p_dark = 0.0;
  double p_link = 0.0;
  double t_prep_s = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  double yield_per_s = 0.0;
  double q_x = 0.0;
  double q_x_stderr = 0.0;
  double q_z_max = 0.0;
  double q_z_max_stderr = 0.0;
  double fidelity = 0.0;
  double key_rate_raw = 0.0;
  double key_rate_clamped = 0.0;
  double discard_fraction = 0.0;
  std::vector<double> mean_storage_s;  // central-station storage per party
  std::string error;
  double wall_time_s = 0.0;

  /// Field-wise equality; NaN equals NaN.
  bool same_as(const ResultRow& other) const;
};

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_output_format(const std::string& name);

const std::vector<std::string>& result_columns();

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string emit_results(const std::vector<ResultRow>& rows, OutputFormat format);

/// Inverse of emit_results. Throws std::runtime_error on malformed input.
std::vector<ResultRow> parse_csv_results(const std::string& text);
std::vector<ResultRow> parse_json_results(const std::string& text);

/// `text` with the wall_time_s column removed, for byte comparisons.
std::string strip_wall_time(const std::string& csv);

}  // namespace ghzswitch
