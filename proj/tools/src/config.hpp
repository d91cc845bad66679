#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lwr/filtering.hpp"
#include "lwr/mesh.hpp"
#include "lwr/params.hpp"
#include "lwr/stepping.hpp"

namespace lwr::cli {

/// Any problem with the configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownKey : public ConfigError {
 public:
  UnknownKey(const std::string& key, const std::string& where)
      : ConfigError("unknown key '" + key + "' (" + where + ")"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class TypeError : public ConfigError {
 public:
  TypeError(const std::string& key, const std::string& where, const std::string& detail)
      : ConfigError("bad value for '" + key + "' (" + where + "): " + detail), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class MissingScenario : public ConfigError {
 public:
  MissingScenario() : ConfigError("no scenario given; set 'scenario' in the config or pass --scenario") {}
};

enum class Command { Run, ConvSpace, ConvTime, Study };

std::string_view command_name(Command c);

/// One raw `key = value` assignment and where it came from.
struct RawEntry {
  std::string value;
  std::string source;  ///< "file.cfg:12" or "--flag"
};
using RawConfig = std::map<std::string, RawEntry>;

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
/// A line without `=` is reported as a TypeError naming the line.
RawConfig parse_config_text(std::string_view text, const std::string& source_name);
RawConfig read_config_file(const std::filesystem::path& path);

/// Fully resolved settings of one invocation.
struct RunConfig {
  std::string scenario;
  int n_elements = 0;
  int degree = 1;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  ModelParams params{};
  DeltaRule delta_rule{};
  FilterBoundary filter_boundary = FilterBoundary::Natural;
  double dt = 0.0;
  double t_final = 0.0;
  NewtonOptions newton{};
  int algorithm = 2;
  std::string output_dir = ".";
  std::vector<int> space_ladder;
  std::vector<double> time_ladder;
  std::vector<double> chi_list;
  std::vector<int> deconv_list;
  std::vector<int> degree_list;
  std::vector<double> snapshot_times;
  int jobs = 1;

  /// "# lwr <command> key=value ..." covering every key, in a fixed order.
  std::string header(Command command) const;
};

/// Every accepted key, in header order.
const std::vector<std::string>& config_keys();

/// Scenario and command defaults, then `file`, then `flags`.
/// Throws MissingScenario, UnknownKey or TypeError.
RunConfig resolve_config(Command command, const RawConfig& file, const RawConfig& flags);

/// Text of a double with 17 significant digits ("%.17g").
std::string format_real(double v);

}  // namespace lwr::cli
