#include "ghzswitch/results_io.h"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ghzswitch {

namespace {

using json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool same_list(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_double(a[i], b[i])) return false;
  }
  return true;
}

std::string format_stat(double v) { return std::isnan(v) ? "" : format_double(v); }

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_double(values[i]);
  }
  return out;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double parse_double(const std::string& text) {
  if (text.empty()) return kNaN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::runtime_error("bad number '" + text + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& text) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw std::runtime_error("bad integer '" + text + "'");
  return v;
}

std::vector<double> split_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (std::size_t semi; (semi = text.find(';', start)) != std::string::npos; start = semi + 1) {
    out.push_back(parse_double(text.substr(start, semi - start)));
  }
  out.push_back(parse_double(text.substr(start)));
  return out;
}

std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
      continue;
    }
    any = true;
    if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += ch;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quoted field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  return records;
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

double from_json_number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

bool ResultRow::same_as(const ResultRow& o) const {
  const bool cut_equal = t_cut_s.has_value() == o.t_cut_s.has_value() && (!t_cut_s || *t_cut_s == *o.t_cut_s);
  return scenario == o.scenario && goal == o.goal && source == o.source && parties == o.parties &&
         memories == o.memories && same_list(lengths_km, o.lengths_km) && cut_equal &&
         same_double(t_dp_s, o.t_dp_s) && same_double(f_init, o.f_init) && same_double(p_dark, o.p_dark) &&
         same_double(p_link, o.p_link) && same_double(t_prep_s, o.t_prep_s) && n_samples == o.n_samples &&
         seed == o.seed && same_double(yield_per_s, o.yield_per_s) && same_double(q_x, o.q_x) &&
         same_double(q_x_stderr, o.q_x_stderr) && same_double(q_z_max, o.q_z_max) &&
         same_double(q_z_max_stderr, o.q_z_max_stderr) && same_double(fidelity, o.fidelity) &&
         same_double(key_rate_raw, o.key_rate_raw) && same_double(key_rate_clamped, o.key_rate_clamped) &&
         same_double(discard_fraction, o.discard_fraction) && same_list(mean_storage_s, o.mean_storage_s) &&
         error == o.error && same_double(wall_time_s, o.wall_time_s);
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns = {
      "scenario",  "goal",         "source",        "N",                "m",
      "l_list_km", "t_cut_s",      "T_dp_s",        "F_init",           "P_D",
      "P_link",    "T_P_s",        "n_samples",     "seed",             "yield_per_s",
      "q_x",       "q_x_stderr",   "q_z_max",       "q_z_max_stderr",   "fidelity",
      "key_rate_raw", "key_rate_clamped", "discard_fraction", "mean_storage_s", "error",
      "wall_time_s"};
  return columns;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::string emit_results(const std::vector<ResultRow>& rows, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json out = json::array();
    for (const auto& r : rows) {
      json j = json::object();
      j["scenario"] = r.scenario;
      j["goal"] = r.goal;
      j["source"] = r.source;
      j["N"] = r.parties;
      j["m"] = r.memories;
      j["l_list_km"] = r.lengths_km;
      j["t_cut_s"] = r.t_cut_s ? json(*r.t_cut_s) : json(nullptr);
      j["T_dp_s"] = r.t_dp_s;
      j["F_init"] = r.f_init;
      j["P_D"] = r.p_dark;
      j["P_link"] = r.p_link;
      j["T_P_s"] = r.t_prep_s;
      j["n_samples"] = r.n_samples;
      j["seed"] = r.seed;
      j["yield_per_s"] = number_or_null(r.yield_per_s);
      j["q_x"] = number_or_null(r.q_x);
      j["q_x_stderr"] = number_or_null(r.q_x_stderr);
      j["q_z_max"] = number_or_null(r.q_z_max);
      j["q_z_max_stderr"] = number_or_null(r.q_z_max_stderr);
      j["fidelity"] = number_or_null(r.fidelity);
      j["key_rate_raw"] = number_or_null(r.key_rate_raw);
      j["key_rate_clamped"] = number_or_null(r.key_rate_clamped);
      j["discard_fraction"] = number_or_null(r.discard_fraction);
      j["mean_storage_s"] = r.mean_storage_s;
      j["error"] = r.error;
      j["wall_time_s"] = r.wall_time_s;
      out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    const std::vector<std::string> fields = {
        r.scenario,
        r.goal,
        r.source,
        std::to_string(r.parties),
        std::to_string(r.memories),
        join(r.lengths_km),
        r.t_cut_s ? format_double(*r.t_cut_s) : "none",
        format_double(r.t_dp_s),
        format_double(r.f_init),
        format_double(r.p_dark),
        format_double(r.p_link),
        format_double(r.t_prep_s),
        std::to_string(r.n_samples),
        std::to_string(r.seed),
        format_stat(r.yield_per_s),
        format_stat(r.q_x),
        format_stat(r.q_x_stderr),
        format_stat(r.q_z_max),
        format_stat(r.q_z_max_stderr),
        format_stat(r.fidelity),
        format_stat(r.key_rate_raw),
        format_stat(r.key_rate_clamped),
        format_stat(r.discard_fraction),
        join(r.mean_storage_s),
        r.error,
        format_double(r.wall_time_s),
    };
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << quote(fields[i]);
    os << "\n";
  }
  return os.str();
}

std::vector<ResultRow> parse_csv_results(const std::string& text) {
  const auto records = split_records(text);
  if (records.empty() || records.front() != result_columns()) throw std::runtime_error("unexpected CSV header");
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    if (f.size() != result_columns().size()) {
      throw std::runtime_error("CSV record " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
    }
    ResultRow r;
    r.scenario = f[0];
    r.goal = f[1];
    r.source = f[2];
    r.parties = parse_int<int>(f[3]);
    r.memories = parse_int<int>(f[4]);
    r.lengths_km = split_list(f[5]);
    if (f[6] != "none") r.t_cut_s = parse_double(f[6]);
    r.t_dp_s = parse_double(f[7]);
    r.f_init = parse_double(f[8]);
    r.p_dark = parse_double(f[9]);
    r.p_link = parse_double(f[10]);
    r.t_prep_s = parse_double(f[11]);
    r.n_samples = parse_int<std::uint64_t>(f[12]);
    r.seed = parse_int<std::uint64_t>(f[13]);
    r.yield_per_s = parse_double(f[14]);
    r.q_x = parse_double(f[15]);
    r.q_x_stderr = parse_double(f[16]);
    r.q_z_max = parse_double(f[17]);
    r.q_z_max_stderr = parse_double(f[18]);
    r.fidelity = parse_double(f[19]);
    r.key_rate_raw = parse_double(f[20]);
    r.key_rate_clamped = parse_double(f[21]);
    r.discard_fraction = parse_double(f[22]);
    r.mean_storage_s = split_list(f[23]);
    r.error = f[24];
    r.wall_time_s = parse_double(f[25]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> parse_json_results(const std::string& text) {
  std::vector<ResultRow> rows;
  try {
    const json doc = json::parse(text);
    if (!doc.is_array()) throw std::runtime_error("expected a JSON array of rows");
    for (const auto& j : doc) {
      ResultRow r;
      r.scenario = j.at("scenario").get<std::string>();
      r.goal = j.at("goal").get<std::string>();
      r.source = j.at("source").get<std::string>();
      r.parties = j.at("N").get<int>();
      r.memories = j.at("m").get<int>();
      r.lengths_km = j.at("l_list_km").get<std::vector<double>>();
      if (!j.at("t_cut_s").is_null()) r.t_cut_s = j.at("t_cut_s").get<double>();
      r.t_dp_s = j.at("T_dp_s").get<double>();
      r.f_init = j.at("F_init").get<double>();
      r.p_dark = j.at("P_D").get<double>();
      r.p_link = j.at("P_link").get<double>();
      r.t_prep_s = j.at("T_P_s").get<double>();
      r.n_samples = j.at("n_samples").get<std::uint64_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.yield_per_s = from_json_number(j.at("yield_per_s"));
      r.q_x = from_json_number(j.at("q_x"));
      r.q_x_stderr = from_json_number(j.at("q_x_stderr"));
      r.q_z_max = from_json_number(j.at("q_z_max"));
      r.q_z_max_stderr = from_json_number(j.at("q_z_max_stderr"));
      r.fidelity = from_json_number(j.at("fidelity"));
      r.key_rate_raw = from_json_number(j.at("key_rate_raw"));
      r.key_rate_clamped = from_json_number(j.at("key_rate_clamped"));
      r.discard_fraction = from_json_number(j.at("discard_fraction"));
      r.mean_storage_s = j.at("mean_storage_s").get<std::vector<double>>();
      r.error = j.at("error").get<std::string>();
      r.wall_time_s = j.at("wall_time_s").get<double>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON results: ") + e.what());
  }
  return rows;
}

std::string strip_wall_time(const std::string& csv) {
  std::string out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) {
    const auto comma = line.rfind(',');
    out += line.substr(0, comma == std::string::npos ? line.size() : comma);
    out += '\n';
  }
  return out;
}

}  // namespace ghzswitch
