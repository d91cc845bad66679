#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "lwr/analysis.hpp"
#include "lwr/errors.hpp"
#include "lwr/scenarios.hpp"
#include "lwr/stepping.hpp"

namespace lwr::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kProfileSamples = 512;

std::string short_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Label for a resolution: "1/k" when the reciprocal is an integer.
std::string resolution_label(double r) {
  const double k = std::round(1.0 / r);
  if (k >= 1.0 && std::abs(1.0 / k - r) <= 1e-12 * r) return "1/" + std::to_string(static_cast<long>(k));
  return format_real(r);
}

struct RunSpec {
  int n_elements = 0;
  int degree = 1;
  double dt = 0.0;
  double chi = 0.0;
  int deconv_order = 0;
};

struct RunOutcome {
  std::optional<Trajectory> trajectory;
  std::string error;
  double h = 0.0;
};

RunOutcome execute(const RunConfig& c, const Scenario& scenario, const RunSpec& spec,
                   const RunOptions& options) {
  RunOutcome out;
  try {
    const Mesh1D mesh(0.0, 1.0, spec.n_elements, spec.degree, c.boundary);
    out.h = mesh.h();
    ModelParams p = c.params;
    p.chi = spec.chi;
    p.deconv_order = spec.deconv_order;
    p.delta = c.delta_rule(mesh.h());
    auto ops = std::make_shared<const AssembledOperators>(assemble(mesh));
    auto filter = std::make_shared<const FilterContext>(*ops, p.delta, p.deconv_order, c.filter_boundary);
    const BackwardEulerSystem system(scenario, ops, filter, p, spec.dt, c.newton);
    out.trajectory = run_algorithm(c.algorithm, system, TimeGrid::from_final_time(c.t_final, spec.dt),
                                   options);
  } catch (const lwr::Error& e) {
    out.error = e.what();
  }
  return out;
}

/// Runs task(i) for i in [0, count) on up to `jobs` threads. Results come
/// back indexed, so callers can write outputs in ladder order.
template <class Task>
std::vector<RunOutcome> run_all(std::size_t count, int jobs, Task task) {
  std::vector<RunOutcome> results(count);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = task(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) results[i] = task(i);
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.output_dir);
  fs::create_directories(dir);
  return dir;
}

void write_profile(const fs::path& path, const std::string& header, const FeFunction& rho,
                   const Scenario& scenario, double t) {
  std::ofstream out = open_output(path);
  out << header << " profile_t=" << format_real(t) << "\n";
  out << "x,rho_h,rho_exact\n";
  const Mesh1D& m = rho.mesh();
  for (int i = 0; i < kProfileSamples; ++i) {
    const double x = m.x_left() + m.length() * i / (kProfileSamples - 1);
    out << format_real(x) << ',' << format_real(evaluate(rho, x)) << ',';
    if (scenario.has_exact()) out << format_real(scenario.exact_solution(x, t));
    out << '\n';
  }
}

void write_diagnostics(const fs::path& path, const std::string& header, const Trajectory& t) {
  std::ofstream out = open_output(path);
  out << header << "\n";
  out << "n,t,l2_norm,energy_E,zeta_Z,newton_iters,stab_dissipation\n";
  for (const StepDiagnostics& d : t.diagnostics) {
    out << d.step << ',' << format_real(d.t) << ',' << format_real(d.l2_norm) << ','
        << format_real(d.energy_E) << ',' << format_real(d.zeta_Z) << ',' << d.newton_iters << ','
        << format_real(d.stab_dissipation) << '\n';
  }
}

/// Snapshot whose step is nearest to time t.
const Snapshot& snapshot_at(const Trajectory& traj, double t) {
  const long want = std::lround(t / traj.grid.dt);
  const Snapshot* best = &traj.snapshots.front();
  for (const Snapshot& s : traj.snapshots)
    if (std::abs(s.step - want) < std::abs(best->step - want)) best = &s;
  return *best;
}

/// Writes a convergence CSV. Failed rungs get "nan" as error, no rate, and a
/// trailing comment; rates are only given between consecutive successful
/// rungs whose resolutions halve.
CommandResult write_ladder(const RunConfig& c, Command command, const std::vector<double>& resolutions,
                           const std::vector<RunOutcome>& outcomes, const fs::path& path,
                           std::ostream& log) {
  CommandResult result;
  std::ofstream out = open_output(path);
  out << c.header(command) << "\n";
  out << "resolution,h_or_dt,error_linf_l2,rate\n";
  std::optional<LadderEntry> prev;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const std::string label = resolution_label(resolutions[i]);
    const RunOutcome& o = outcomes[i];
    std::optional<double> error;
    if (o.trajectory) error = o.trajectory->max_error();
    if (!o.error.empty() || !error) {
      result.exit_code = 1;
      const std::string why = o.error.empty() ? "scenario has no exact solution" : o.error;
      failures.push_back("# rung " + label + " failed: " + why);
      out << label << ',' << format_real(resolutions[i]) << ",nan,\n";
      log << label << "  FAILED: " << why << "\n";
      prev.reset();
      continue;
    }
    const LadderEntry entry{label, resolutions[i], *error};
    std::optional<double> rate;
    if (prev) {
      try {
        rate = convergence_table({*prev, entry}).rows[1].rate;
      } catch (const lwr::Error&) {
        rate.reset();
      }
    }
    out << label << ',' << format_real(resolutions[i]) << ',' << format_real(*error) << ','
        << (rate ? format_real(*rate) : std::string()) << '\n';
    log << label << "  error " << short_real(*error);
    if (rate) log << "  rate " << short_real(*rate);
    log << "  (max Newton iterations " << o.trajectory->max_newton_iterations() << ")\n";
    prev = entry;
  }
  for (const auto& f : failures) out << f << '\n';
  result.files.push_back(path);
  return result;
}

}  // namespace

CommandResult cmd_run(const RunConfig& c, std::ostream& log) {
  const Scenario scenario = scenario_by_name(c.scenario);
  RunOptions options;
  options.newton = c.newton;
  options.keep_all_states = false;
  options.snapshot_times = c.snapshot_times;
  const RunSpec spec{c.n_elements, c.degree, c.dt, c.params.chi, c.params.deconv_order};
  const RunOutcome o = execute(c, scenario, spec, options);

  CommandResult result;
  if (!o.trajectory) {
    log << "run failed: " << o.error << "\n";
    result.exit_code = 1;
    return result;
  }
  const fs::path dir = output_dir(c);
  const std::string header = c.header(Command::Run);
  const fs::path diag = dir / (c.scenario + "_run_diagnostics.csv");
  write_diagnostics(diag, header, *o.trajectory);
  result.files.push_back(diag);
  for (double t : c.snapshot_times) {
    const Snapshot& s = snapshot_at(*o.trajectory, t);
    const fs::path path = dir / (c.scenario + "_run_profile_t" + short_real(s.t) + ".csv");
    write_profile(path, header, s.rho, scenario, s.t);
    result.files.push_back(path);
  }
  log << c.scenario << ": " << o.trajectory->grid.n_steps << " steps, max Newton iterations "
      << o.trajectory->max_newton_iterations();
  if (auto e = o.trajectory->max_error()) log << ", max L2 error " << short_real(*e);
  log << "\n";
  return result;
}

CommandResult cmd_convergence_space(const RunConfig& c, std::ostream& log) {
  const Scenario scenario = scenario_by_name(c.scenario);
  RunOptions options;
  options.newton = c.newton;
  options.keep_all_states = false;
  std::vector<double> resolutions;
  for (int n : c.space_ladder) resolutions.push_back(1.0 / n);
  const auto outcomes = run_all(c.space_ladder.size(), c.jobs, [&](std::size_t i) {
    return execute(c, scenario, {c.space_ladder[i], c.degree, c.dt, c.params.chi, c.params.deconv_order},
                   options);
  });
  return write_ladder(c, Command::ConvSpace, resolutions, outcomes,
                      output_dir(c) / (c.scenario + "_conv_space.csv"), log);
}

CommandResult cmd_convergence_time(const RunConfig& c, std::ostream& log) {
  const Scenario scenario = scenario_by_name(c.scenario);
  RunOptions options;
  options.newton = c.newton;
  options.keep_all_states = false;
  const auto outcomes = run_all(c.time_ladder.size(), c.jobs, [&](std::size_t i) {
    return execute(c, scenario, {c.n_elements, c.degree, c.time_ladder[i], c.params.chi, c.params.deconv_order},
                   options);
  });
  return write_ladder(c, Command::ConvTime, c.time_ladder, outcomes,
                      output_dir(c) / (c.scenario + "_conv_time.csv"), log);
}

CommandResult cmd_scenario_study(const RunConfig& c, std::ostream& log) {
  const Scenario scenario = scenario_by_name(c.scenario);
  std::vector<RunSpec> specs;
  for (double chi : c.chi_list)
    for (int order : c.deconv_list)
      for (int degree : c.degree_list) specs.push_back({c.n_elements, degree, c.dt, chi, order});

  RunOptions options;
  options.newton = c.newton;
  options.keep_all_states = false;
  options.snapshot_times = c.snapshot_times;
  const auto outcomes =
      run_all(specs.size(), c.jobs, [&](std::size_t i) { return execute(c, scenario, specs[i], options); });

  CommandResult result;
  const fs::path dir = output_dir(c);
  const std::string header = c.header(Command::Study);
  const fs::path summary_path = dir / (c.scenario + "_study_summary.csv");
  std::ofstream summary = open_output(summary_path);
  summary << header << "\n";
  summary << "chi,deconv_order,degree,t,l2_error,total_variation,overshoot\n";

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const RunSpec& s = specs[i];
    const std::string tag = "chi" + short_real(s.chi) + "_N" + std::to_string(s.deconv_order) + "_P" +
                            std::to_string(s.degree);
    if (!outcomes[i].trajectory) {
      result.exit_code = 1;
      summary << "# run " << tag << " failed: " << outcomes[i].error << "\n";
      log << tag << "  FAILED: " << outcomes[i].error << "\n";
      continue;
    }
    for (double t : c.snapshot_times) {
      const Snapshot& snap = snapshot_at(*outcomes[i].trajectory, t);
      const fs::path path = dir / (c.scenario + "_study_" + tag + "_t" + short_real(snap.t) + ".csv");
      write_profile(path, header + " study_chi=" + format_real(s.chi) + " study_deconv_order=" +
                              std::to_string(s.deconv_order) + " study_degree=" + std::to_string(s.degree),
                    snap.rho, scenario, snap.t);
      result.files.push_back(path);

      double reference = -INFINITY;
      for (int k = 0; k < kProfileSamples; ++k) {
        const double x = double(k) / (kProfileSamples - 1);
        reference = std::max(reference, scenario.exact_solution(x, snap.t));
      }
      const double err = l2_error(snap.rho, scenario.exact_solution, snap.t);
      const double tv = total_variation(snap.rho);
      const double over = overshoot(snap.rho, reference);
      summary << format_real(s.chi) << ',' << s.deconv_order << ',' << s.degree << ','
              << format_real(snap.t) << ',' << format_real(err) << ',' << format_real(tv) << ','
              << format_real(over) << '\n';
      log << tag << "  t=" << short_real(snap.t) << "  error " << short_real(err) << "  TV "
          << short_real(tv) << "  overshoot " << short_real(over) << "\n";
    }
  }
  result.files.insert(result.files.begin(), summary_path);
  return result;
}

CommandResult dispatch(Command command, const RunConfig& config, std::ostream& log) {
  switch (command) {
    case Command::Run: return cmd_run(config, log);
    case Command::ConvSpace: return cmd_convergence_space(config, log);
    case Command::ConvTime: return cmd_convergence_time(config, log);
    case Command::Study: return cmd_scenario_study(config, log);
  }
  return {};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stabilized finite element solver for the LWR density model"};
  app.require_subcommand(1);

  struct Sub {
    Command command;
    CLI::App* app;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  const std::pair<Command, const char*> commands[] = {
      {Command::Run, "single run with diagnostics and profiles"},
      {Command::ConvSpace, "convergence ladder in h"},
      {Command::ConvTime, "convergence ladder in dt"},
      {Command::Study, "parameter sweep with profile output"},
  };
  std::vector<std::unique_ptr<Sub>> subs;
  for (const auto& [command, description] : commands) {
    auto sub = std::make_unique<Sub>();
    sub->command = command;
    sub->app = app.add_subcommand(std::string(command_name(command)), description);
    sub->app->add_option("--config,-c", sub->config_path, "key = value config file");
    for (const std::string& key : config_keys()) {
      sub->options[key] = sub->app->add_option("--" + key, sub->values[key]);
    }
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& sub : subs) {
    if (!sub->app->parsed()) continue;
    RunConfig config;
    try {
      RawConfig file;
      if (!sub->config_path.empty()) file = read_config_file(sub->config_path);
      RawConfig flags;
      for (const auto& [key, opt] : sub->options)
        if (opt->count() > 0) flags[key] = RawEntry{sub->values[key], "--" + key};
      config = resolve_config(sub->command, file, flags);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return 2;
    }
    try {
      const CommandResult r = dispatch(sub->command, config, out);
      for (const auto& f : r.files) out << "wrote " << f.string() << "\n";
      return r.exit_code;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace lwr::cli
