#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghzswitch/config.h"
#include "ghzswitch/presets.h"
#include "ghzswitch/results_io.h"
#include "ghzswitch/sweep.h"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string target;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> chunks;
  std::string format = "csv";
  std::string out;
  bool quiet = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ghzswitch::ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> flag_overrides(const Options& o) {
  std::vector<std::string> out = o.overrides;
  if (o.samples) out.push_back("run.samples=" + std::to_string(*o.samples));
  if (o.seed) out.push_back("run.seed=" + std::to_string(*o.seed));
  if (o.workers) out.push_back("run.workers=" + std::to_string(*o.workers));
  if (o.chunks) out.push_back("run.chunks=" + std::to_string(*o.chunks));
  return out;
}

int execute(const std::string& document, const Options& o, bool require_single, bool require_axes) {
  ghzswitch::SweepSpec spec;
  ghzswitch::OutputFormat format;
  try {
    format = ghzswitch::parse_output_format(o.format);
    spec = ghzswitch::parse_config(ghzswitch::apply_overrides(document, flag_overrides(o)));
    if (require_single && spec.grid_size() != 1) {
      throw ghzswitch::ConfigError("sweep", "`run` expects a single point; use `sweep` for grids");
    }
    if (require_axes && spec.axes.empty()) throw ghzswitch::ConfigError("sweep", "`sweep` needs at least one axis");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  ghzswitch::SweepProgress progress;
  if (!o.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r[" << done << "/" << total << "] grid points" << (done == total ? "\n" : "") << std::flush;
    };
  }
  const auto rows = ghzswitch::run_sweep(spec, progress);
  const std::string text = ghzswitch::emit_results(rows, format);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(o.out);
    if (!file || !(file << text)) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return kRuntimeError;
    }
  }

  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "warning: " << r.scenario << " N=" << r.parties << " m=" << r.memories << ": " << r.error << "\n";
    }
  }
  return failed == rows.size() ? kRuntimeError : kOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "GHZ states per grid point (default from config, else 100000)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--chunks", o.chunks, "independent batches per grid point")->check(CLI::PositiveNumber);
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--override", o.overrides, "dotted key=value edit, e.g. noise.T_dp_s=0.5");
  cmd->add_flag("--quiet", o.quiet, "no progress on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for GHZ-state distribution through an entanglement switch"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "simulate the single point described by a config file");
  run->add_option("config", o.target, "YAML config")->required();
  add_common(run, o);

  auto* sweep = app.add_subcommand("sweep", "simulate every point of the config's sweep grid");
  sweep->add_option("config", o.target, "YAML config")->required();
  add_common(sweep, o);

  auto* preset = app.add_subcommand("preset", "run a built-in parameter study");
  preset->add_option("name", o.target, "preset name");
  bool list = false, show = false;
  preset->add_flag("--list", list, "print preset names and exit");
  preset->add_flag("--show", show, "print the preset's config document and exit");
  add_common(preset, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset->parsed()) {
      if (list) {
        for (const auto& n : ghzswitch::preset_names()) std::cout << n << "\n";
        return kOk;
      }
      if (o.target.empty()) throw ghzswitch::ConfigError("preset", "missing preset name (try --list)");
      const std::string doc = ghzswitch::preset_document(o.target);
      if (show) {
        std::cout << ghzswitch::apply_overrides(doc, flag_overrides(o));
        return kOk;
      }
      return execute(doc, o, false, false);
    }
    const std::string doc = read_file(o.target);
    return execute(doc, o, run->parsed(), sweep->parsed());
  } catch (const ghzswitch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ghzswitch::UnknownPreset& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
