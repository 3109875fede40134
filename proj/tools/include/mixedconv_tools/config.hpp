#pragma once

// Experiment configuration: one JSON file with a section per module.
//
//   basis         {"dim", "matrix"}
//   axes          {"periodic", "half_width", "periods", "resolution"}
//   weights       {"omega", "v", "omega_line_only"}
//   exponents     {"p", "r"}
//   generator     {"kind", "alpha", "center", "shear", "trig", "offset"}
//   sequence      [{"index", "value"}, ...]
//   harness       {"seed", "count", "dims", "weighted", "margin",
//                  "resolution", "refine", "N", "trials", "out", "plots"}
//   stft          {"points", "refine_points", "rho", "tol"}
//   window_change {"half_width", "cells", "x_step_cells", "xi_step",
//                  "radius", "max_change", "f_center", "f_frequency"}
//
// Every section is optional; commands complain about what they need.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixedconv/harness.hpp"

namespace mixedconv::tools {

using nlohmann::json;

/// Schema or I/O problem in a config file. `where()` is "line N, field F"
/// or whichever of the two is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what),
        where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct Config {
  std::string path;
  std::string text;
  json root = json::object();

  bool has(const std::string& section) const { return root.contains(section); }
  const json& section(const std::string& name) const;
};

/// Reads, parses and schema-checks a config file.
Config load_config(const std::string& path);
/// Parses and schema-checks config text (path only used in messages).
Config parse_config(const std::string& text, const std::string& path = "<config>");

/// Run-level settings after merging config and command line.
struct RunSettings {
  std::uint64_t seed = 1;
  int count = 10;
  std::vector<int> dims{1, 2, 3};
  bool weighted = false;
  double margin = 0.05;
  int resolution = 64;
  bool refine = false;
  std::vector<int> N{4, 16, 64};
  int trials = 500;
  std::string out = "mixedconv_out";
  bool plots = true;
};

RunSettings settings_from_config(const Config& config);

/// The instance described by basis/axes/weights/exponents/generator/
/// sequence. Throws ConfigError naming the missing or inconsistent field.
InstanceParams instance_from_config(const Config& config);

/// Parses "2,inf" or [2, "inf"].
ExponentVector exponents_from_json(const json& value, const std::string& field);

}  // namespace mixedconv::tools
