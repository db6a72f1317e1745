#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ghzswitch/config.h"

namespace ghzswitch {

class UnknownPreset : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> preset_names();

/// Configuration document of a preset, suitable for apply_overrides.
/// Throws UnknownPreset listing the available names.
std::string preset_document(const std::string& name);

SweepSpec preset(const std::string& name);

/// `per_decade` log-spaced values from 10^lo to 10^hi inclusive.
std::vector<double> log_spaced(int lo, int hi, int per_decade);

}  // namespace ghzswitch
