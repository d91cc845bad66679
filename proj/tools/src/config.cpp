#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "lwr/errors.hpp"
#include "lwr/scenarios.hpp"

namespace lwr::cli {

std::string_view command_name(Command c) {
  switch (c) {
    case Command::Run: return "run";
    case Command::ConvSpace: return "conv-space";
    case Command::ConvTime: return "conv-time";
    case Command::Study: return "study";
  }
  return "?";
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Field {
  const std::string& key;
  const std::string& where;

  [[noreturn]] void fail(std::string_view text, const char* expected) const {
    throw TypeError(key, where, "expected " + std::string(expected) + ", got '" + std::string(text) + "'");
  }

  int to_int(std::string_view text) const {
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) fail(text, "an integer");
    return v;
  }

  /// Accepts plain reals and fractions such as "1/160" or "2/3".
  double to_real(std::string_view text) const {
    text = trim(text);
    auto plain = [&](std::string_view t) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail(text, "a real number");
      return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return plain(text);
    const double den = plain(trim(text.substr(slash + 1)));
    if (den == 0.0) fail(text, "a nonzero denominator");
    return plain(trim(text.substr(0, slash))) / den;
  }

  std::vector<int> to_int_list(std::string_view text) const {
    std::vector<int> out;
    for (auto item : split_list(text)) out.push_back(to_int(item));
    return out;
  }

  std::vector<double> to_real_list(std::string_view text) const {
    std::vector<double> out;
    for (auto item : split_list(text)) out.push_back(to_real(item));
    return out;
  }
};

template <class T, class F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format(values[i]);
  }
  return out;
}

std::string int_text(int v) { return std::to_string(v); }

struct KeySpec {
  std::string name;
  std::function<void(RunConfig&, const Field&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"scenario", [](RunConfig& c, const Field&, std::string_view v) { c.scenario = trim(v); },
       [](const RunConfig& c) { return c.scenario; }},
      {"n_elements", [](RunConfig& c, const Field& f, std::string_view v) { c.n_elements = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.n_elements); }},
      {"degree", [](RunConfig& c, const Field& f, std::string_view v) { c.degree = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.degree); }},
      {"boundary",
       [](RunConfig& c, const Field& f, std::string_view v) {
         v = trim(v);
         if (v == "dirichlet") c.boundary = BoundaryKind::Dirichlet;
         else if (v == "periodic") c.boundary = BoundaryKind::Periodic;
         else f.fail(v, "'dirichlet' or 'periodic'");
       },
       [](const RunConfig& c) { return std::string(to_string(c.boundary)); }},
      {"v_f", [](RunConfig& c, const Field& f, std::string_view v) { c.params.v_f = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.params.v_f); }},
      {"rho_m", [](RunConfig& c, const Field& f, std::string_view v) { c.params.rho_m = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.params.rho_m); }},
      {"chi", [](RunConfig& c, const Field& f, std::string_view v) { c.params.chi = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.params.chi); }},
      {"deconv_order",
       [](RunConfig& c, const Field& f, std::string_view v) { c.params.deconv_order = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.params.deconv_order); }},
      {"gamma", [](RunConfig& c, const Field& f, std::string_view v) { c.params.gamma = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.params.gamma); }},
      {"delta_coeff", [](RunConfig& c, const Field& f, std::string_view v) { c.delta_rule.coeff = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.delta_rule.coeff); }},
      {"delta_exponent",
       [](RunConfig& c, const Field& f, std::string_view v) { c.delta_rule.exponent = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.delta_rule.exponent); }},
      {"filter_boundary",
       [](RunConfig& c, const Field& f, std::string_view v) {
         v = trim(v);
         if (v == "natural") c.filter_boundary = FilterBoundary::Natural;
         else if (v == "clamped") c.filter_boundary = FilterBoundary::Clamped;
         else if (v == "zero") c.filter_boundary = FilterBoundary::Zero;
         else f.fail(v, "'natural', 'clamped' or 'zero'");
       },
       [](const RunConfig& c) -> std::string {
         switch (c.filter_boundary) {
           case FilterBoundary::Clamped: return "clamped";
           case FilterBoundary::Zero: return "zero";
           default: return "natural";
         }
       }},
      {"dt", [](RunConfig& c, const Field& f, std::string_view v) { c.dt = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.dt); }},
      {"t_final", [](RunConfig& c, const Field& f, std::string_view v) { c.t_final = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.t_final); }},
      {"newton_tol", [](RunConfig& c, const Field& f, std::string_view v) { c.newton.tol = f.to_real(v); },
       [](const RunConfig& c) { return format_real(c.newton.tol); }},
      {"newton_max_iter",
       [](RunConfig& c, const Field& f, std::string_view v) { c.newton.max_iter = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.newton.max_iter); }},
      {"algorithm", [](RunConfig& c, const Field& f, std::string_view v) { c.algorithm = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.algorithm); }},
      {"output_dir", [](RunConfig& c, const Field&, std::string_view v) { c.output_dir = trim(v); },
       [](const RunConfig& c) { return c.output_dir; }},
      {"space_ladder",
       [](RunConfig& c, const Field& f, std::string_view v) { c.space_ladder = f.to_int_list(v); },
       [](const RunConfig& c) { return join(c.space_ladder, int_text); }},
      {"time_ladder",
       [](RunConfig& c, const Field& f, std::string_view v) { c.time_ladder = f.to_real_list(v); },
       [](const RunConfig& c) { return join(c.time_ladder, format_real); }},
      {"chi_list", [](RunConfig& c, const Field& f, std::string_view v) { c.chi_list = f.to_real_list(v); },
       [](const RunConfig& c) { return join(c.chi_list, format_real); }},
      {"deconv_list",
       [](RunConfig& c, const Field& f, std::string_view v) { c.deconv_list = f.to_int_list(v); },
       [](const RunConfig& c) { return join(c.deconv_list, int_text); }},
      {"degree_list",
       [](RunConfig& c, const Field& f, std::string_view v) { c.degree_list = f.to_int_list(v); },
       [](const RunConfig& c) { return join(c.degree_list, int_text); }},
      {"snapshot_times",
       [](RunConfig& c, const Field& f, std::string_view v) { c.snapshot_times = f.to_real_list(v); },
       [](const RunConfig& c) { return join(c.snapshot_times, format_real); }},
      {"jobs", [](RunConfig& c, const Field& f, std::string_view v) { c.jobs = f.to_int(v); },
       [](const RunConfig& c) { return int_text(c.jobs); }},
  };
  return specs;
}

const KeySpec* find_spec(const std::string& key) {
  for (const auto& s : key_specs())
    if (s.name == key) return &s;
  return nullptr;
}

void apply(RunConfig& config, const RawConfig& raw) {
  for (const auto& [key, entry] : raw) {
    if (key == "scenario") continue;  // resolved first
    const KeySpec* spec = find_spec(key);
    if (!spec) throw UnknownKey(key, entry.source);
    spec->set(config, Field{key, entry.source}, entry.value);
  }
}

void check(bool ok, const std::string& key, const RunConfig& c, const char* rule) {
  if (!ok) throw TypeError(key, "effective config", std::string(rule) + ", got " + find_spec(key)->get(c));
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& s : key_specs()) out.push_back(s.name);
    return out;
  }();
  return keys;
}

RawConfig parse_config_text(std::string_view text, const std::string& source_name) {
  RawConfig out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source_name + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw TypeError(std::string(line), where, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw TypeError("", where, "missing key before '='");
    out[key] = RawEntry{std::string(trim(line.substr(eq + 1))), where};
  }
  return out;
}

RawConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

RunConfig resolve_config(Command command, const RawConfig& file, const RawConfig& flags) {
  std::string name;
  if (auto it = flags.find("scenario"); it != flags.end()) name = it->second.value;
  else if (auto jt = file.find("scenario"); jt != file.end()) name = jt->second.value;
  name = std::string(trim(name));
  if (name.empty()) throw MissingScenario();

  Scenario scenario;
  try {
    scenario = scenario_by_name(name);
  } catch (const lwr::Error&) {
    const auto& entry = flags.count("scenario") ? flags.at("scenario") : file.at("scenario");
    throw TypeError("scenario", entry.source, "unknown scenario '" + name + "'");
  }

  RunConfig c;
  c.scenario = name;
  const ScenarioDefaults& d = scenario.defaults;
  c.n_elements = d.n_elements;
  c.degree = d.degree;
  c.boundary = d.boundary;
  c.dt = d.dt;
  c.t_final = d.t_final;
  c.delta_rule = d.delta_rule;
  c.params = d.params;

  if (name == "manufactured" && command == Command::ConvSpace) {
    c.t_final = 0.02;
    c.dt = 5e-6;
    c.algorithm = 1;
  }
  if (command == Command::ConvSpace) c.space_ladder = {6, 12, 24, 48, 96, 192};
  if (command == Command::ConvTime) c.time_ladder = {0.1, 0.05, 0.025, 0.0125, 0.00625};

  apply(c, file);
  apply(c, flags);

  // List-valued keys left empty follow the scalar settings.
  if (c.snapshot_times.empty()) c.snapshot_times = {c.t_final};
  if (c.chi_list.empty()) c.chi_list = {c.params.chi};
  if (c.deconv_list.empty()) c.deconv_list = {c.params.deconv_order};
  if (c.degree_list.empty()) c.degree_list = {c.degree};

  check(c.n_elements >= 2, "n_elements", c, "need at least 2 elements");
  check(c.degree == 1 || c.degree == 2, "degree", c, "degree must be 1 or 2");
  check(c.dt > 0.0, "dt", c, "dt must be > 0");
  check(c.t_final >= 0.0, "t_final", c, "t_final must be >= 0");
  check(c.newton.tol > 0.0, "newton_tol", c, "tolerance must be > 0");
  check(c.newton.max_iter >= 0, "newton_max_iter", c, "must be >= 0");
  check(c.algorithm == 1 || c.algorithm == 2, "algorithm", c, "algorithm must be 1 or 2");
  check(c.jobs >= 1, "jobs", c, "need at least one job");
  for (int n : c.space_ladder) check(n >= 2, "space_ladder", c, "every rung needs >= 2 elements");
  for (double s : c.time_ladder) check(s > 0.0, "time_ladder", c, "every step must be > 0");
  for (double x : c.chi_list) check(x >= 0.0, "chi_list", c, "chi must be >= 0");
  for (int n : c.deconv_list) check(n >= 0, "deconv_list", c, "order must be >= 0");
  for (int p : c.degree_list) check(p == 1 || p == 2, "degree_list", c, "degree must be 1 or 2");
  for (double t : c.snapshot_times) check(t >= 0.0 && t <= c.t_final + 1e-12, "snapshot_times", c, "times must lie in [0, t_final]");
  try {
    c.params.validate();
  } catch (const lwr::Error& e) {
    throw ConfigError(std::string("invalid model parameters: ") + e.what());
  }
  try {
    c.delta_rule.validate();
  } catch (const lwr::Error& e) {
    throw ConfigError(std::string("invalid delta rule: ") + e.what());
  }
  return c;
}

std::string RunConfig::header(Command command) const {
  std::string out = "# lwr " + std::string(command_name(command));
  for (const auto& spec : key_specs()) out += " " + spec.name + "=" + spec.get(*this);
  return out;
}

}  // namespace lwr::cli
