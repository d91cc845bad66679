#include "lwr/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "lwr/errors.hpp"

namespace lwr {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Scenario manufactured(double v_f, double rho_m) {
  Scenario s;
  s.name = "manufactured";
  s.initial_condition = [](double) { return 0.0; };
  s.boundary_data = [](BoundaryEnd, double) { return 0.0; };
  s.left_constrained = true;
  s.right_constrained = true;
  s.exact_solution = [](double x, double t) {
    const double sx = std::sin(kPi * x);
    return sx * sx * sx * sx * std::sin(t);
  };
  s.forcing = [v_f, rho_m](double x, double t) {
    const double sx = std::sin(kPi * x);
    const double s4 = sx * sx * sx * sx;
    const double rho = s4 * std::sin(t);
    const double rho_x = 4.0 * kPi * std::cos(kPi * x) * sx * sx * sx * std::sin(t);
    return s4 * std::cos(t) + rho_x * (v_f - 2.0 * v_f / rho_m * rho);
  };
  s.defaults.n_elements = 100;
  s.defaults.degree = 2;
  s.defaults.boundary = BoundaryKind::Dirichlet;
  s.defaults.dt = 1.0 / 160.0;
  s.defaults.t_final = 1.0;
  s.defaults.delta_rule = {0.1, 0.5};
  s.defaults.params = ModelParams{v_f, rho_m, 0.0, 0.0, 1, 0.0};
  return s;
}

Scenario rarefaction() {
  Scenario s;
  s.name = "rarefaction";
  s.initial_condition = [](double) { return 0.0; };
  s.boundary_data = [](BoundaryEnd, double) { return 0.47; };
  s.left_constrained = true;
  s.exact_solution = [init = s.initial_condition](double x, double t) {
    if (t <= 0.0) return init(x);
    if (x <= 0.06 * t) return 0.47;
    if (x < t) return 0.5 - x / (2.0 * t);
    return 0.0;
  };
  s.defaults.n_elements = 128;
  s.defaults.degree = 1;
  s.defaults.boundary = BoundaryKind::Dirichlet;
  s.defaults.dt = 1e-4;
  s.defaults.t_final = 1.0;
  s.defaults.delta_rule = {1.0, 0.5};
  s.defaults.params = ModelParams{1.0, 1.0, 0.0, 0.0, 0, 0.0};
  return s;
}

Scenario shock() {
  Scenario s;
  s.name = "shock";
  // The single point x = 0 is irrelevant to the projection; the inflow DOF
  // is overwritten by the boundary value from the first step on.
  s.initial_condition = [](double) { return 1.0 / 3.0; };
  s.boundary_data = [](BoundaryEnd, double) { return 0.25; };
  s.left_constrained = true;
  s.exact_solution = [init = s.initial_condition](double x, double t) {
    if (t <= 0.0) return init(x);
    return x <= 5.0 / 12.0 * t ? 0.25 : 1.0 / 3.0;
  };
  s.defaults.n_elements = 128;
  s.defaults.degree = 1;
  s.defaults.boundary = BoundaryKind::Dirichlet;
  s.defaults.dt = 1e-4;
  s.defaults.t_final = 1.0;
  s.defaults.delta_rule = {1.0, 0.5};
  s.defaults.params = ModelParams{1.0, 1.0, 0.0, 0.0, 0, 0.0};
  return s;
}

Scenario periodic_transport(SpaceFunction initial_condition) {
  Scenario s;
  s.name = "periodic";
  s.initial_condition = std::move(initial_condition);
  s.boundary_data = [](BoundaryEnd, double) { return 0.0; };
  s.defaults.n_elements = 32;
  s.defaults.degree = 1;
  s.defaults.boundary = BoundaryKind::Periodic;
  s.defaults.dt = 1e-2;
  s.defaults.t_final = 1.0;
  s.defaults.delta_rule = {1.0, 0.5};
  return s;
}

Scenario scenario_by_name(std::string_view name) {
  if (name == "manufactured") return manufactured();
  if (name == "rarefaction") return rarefaction();
  if (name == "shock") return shock();
  throw InvalidParameter("unknown scenario '" + std::string(name) + "'");
}

std::vector<std::string> scenario_names() { return {"manufactured", "rarefaction", "shock"}; }

}  // namespace lwr
