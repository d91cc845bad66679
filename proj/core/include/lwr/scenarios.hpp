#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "lwr/mesh.hpp"
#include "lwr/params.hpp"

namespace lwr {

enum class BoundaryEnd { Left, Right };

/// Mesh and time settings a scenario is normally run with.
struct ScenarioDefaults {
  int n_elements = 128;
  int degree = 1;
  BoundaryKind boundary = BoundaryKind::Dirichlet;
  double dt = 1e-4;
  double t_final = 1.0;
  DeltaRule delta_rule{};
  ModelParams params{};
};

/// Initial data, boundary data, forcing and (optional) exact solution of one
/// experiment on [0, 1].
struct Scenario {
  std::string name;
  SpaceFunction initial_condition;
  std::function<double(BoundaryEnd, double)> boundary_data;
  bool left_constrained = false;
  bool right_constrained = false;
  SpaceTimeFunction forcing;         ///< empty when unforced
  SpaceTimeFunction exact_solution;  ///< empty when unknown
  ScenarioDefaults defaults;

  bool has_forcing() const noexcept { return static_cast<bool>(forcing); }
  bool has_exact() const noexcept { return static_cast<bool>(exact_solution); }
  bool constrained(BoundaryEnd end) const noexcept {
    return end == BoundaryEnd::Left ? left_constrained : right_constrained;
  }
};

/// ρ = sin⁴(πx) sin(t) on [0, 1] with homogeneous data at both ends and the
/// matching forcing.
Scenario manufactured(double v_f = 1.0, double rho_m = 1.0);

/// Empty strand fed at x = 0 with density 0.47: a rarefaction fan.
Scenario rarefaction();

/// Density 1/3 fed with 1/4 at x = 0: a shock moving at speed 5/12.
Scenario shock();

/// Unforced problem on a periodic mesh with the given initial data.
Scenario periodic_transport(SpaceFunction initial_condition);

/// Looks up one of "manufactured", "rarefaction", "shock".
/// Throws InvalidParameter for any other name.
Scenario scenario_by_name(std::string_view name);

std::vector<std::string> scenario_names();

}  // namespace lwr
