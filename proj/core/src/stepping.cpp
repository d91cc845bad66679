#include "lwr/stepping.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lwr/analysis.hpp"
#include "lwr/errors.hpp"

namespace lwr {

NewtonResult newton_solve(const ResidualFunction& residual, const JacobianFunction& jacobian,
                          Vector guess, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidParameter("newton_solve: tol must be > 0");
  NewtonResult result;
  result.x = std::move(guess);
  Vector r = residual(result.x);
  result.residual_norm = norm2(r);
  result.threshold = tol * std::max(1.0, result.residual_norm);
  while (!(result.residual_norm <= result.threshold)) {
    if (result.iterations >= max_iter || !std::isfinite(result.residual_norm)) {
      throw NoConvergence("newton_solve: residual " + std::to_string(result.residual_norm) +
                              " after " + std::to_string(result.iterations) + " iterations",
                          result.iterations, result.residual_norm);
    }
    const Vector delta = lu_solve(jacobian(result.x), r);
    result.x -= delta;
    r = residual(result.x);
    result.residual_norm = norm2(r);
    ++result.iterations;
  }
  return result;
}

BackwardEulerSystem::BackwardEulerSystem(const Scenario& scenario, const Mesh1D& mesh,
                                         const ModelParams& params, double dt,
                                         NewtonOptions newton)
    : BackwardEulerSystem(scenario, std::make_shared<const AssembledOperators>(assemble(mesh)),
                          nullptr, params, dt, newton) {}

BackwardEulerSystem::BackwardEulerSystem(const Scenario& scenario,
                                         std::shared_ptr<const AssembledOperators> ops,
                                         std::shared_ptr<const FilterContext> filter,
                                         const ModelParams& params, double dt,
                                         NewtonOptions newton)
    : scenario_(scenario),
      ops_(std::move(ops)),
      filter_(std::move(filter)),
      params_(params),
      dt_(dt),
      newton_(newton) {
  params_.validate();
  if (!(dt > 0.0)) throw InvalidParameter("BackwardEulerSystem: dt must be > 0");
  if (!filter_) {
    filter_ = std::make_shared<const FilterContext>(*ops_, params_.delta, params_.deconv_order);
  } else if (!(filter_->mesh() == ops_->mesh)) {
    throw MeshMismatch("BackwardEulerSystem: filter and operators on different meshes");
  }

  stabilization_ = filter_->stabilization_matrix(params_.chi);
  linear_part_ = (1.0 / dt_) * ops_->mass;
  linear_part_.add_scaled(params_.v_f, ops_->convection);
  linear_part_ += stabilization_;

  const Mesh1D& m = ops_->mesh;
  if (!m.periodic()) {
    if (scenario_.left_constrained) constrained_.push_back(m.left_boundary_dof());
    if (scenario_.right_constrained) constrained_.push_back(m.right_boundary_dof());
  }
}

Vector BackwardEulerSystem::forcing_at(double t) const {
  return forcing_vector(scenario_.forcing, t, mesh());
}

Vector BackwardEulerSystem::spatial_residual(const Vector& u, double t) const {
  const FeFunction uf(mesh(), u);
  Vector r = params_.v_f * mat_vec(ops_->convection, u);
  r.axpy(-2.0 * params_.v_f / params_.rho_m, b_residual(uf));
  r += mat_vec(stabilization_, u);
  if (scenario_.has_forcing()) r -= forcing_at(t);
  return r;
}

Vector BackwardEulerSystem::residual(const Vector& rho, const Vector& prev, double t_next) const {
  return residual(rho, prev, t_next, forcing_at(t_next));
}

Vector BackwardEulerSystem::residual(const Vector& rho, const Vector& prev, double t_next,
                                     const Vector& forcing) const {
  Vector r = mat_vec(linear_part_, rho);
  r.axpy(-1.0 / dt_, mat_vec(ops_->mass, prev));
  r.axpy(-2.0 * params_.v_f / params_.rho_m, b_residual(FeFunction(mesh(), rho)));
  r -= forcing;
  for (std::size_t i : constrained_) {
    const BoundaryEnd end = i == 0 ? BoundaryEnd::Left : BoundaryEnd::Right;
    r[i] = rho[i] - scenario_.boundary_data(end, t_next);
  }
  return r;
}

DenseMatrix BackwardEulerSystem::jacobian(const Vector& rho) const {
  DenseMatrix j = linear_part_;
  add_b_jacobian(FeFunction(mesh(), rho), -2.0 * params_.v_f / params_.rho_m, j);
  for (std::size_t i : constrained_) {
    auto row = j.row(i);
    std::fill(row.begin(), row.end(), 0.0);
    row[i] = 1.0;
  }
  return j;
}

void BackwardEulerSystem::impose_boundary(FeFunction& rho, double t) const {
  for (std::size_t i : constrained_) {
    const BoundaryEnd end = i == 0 ? BoundaryEnd::Left : BoundaryEnd::Right;
    rho[i] = scenario_.boundary_data(end, t);
  }
}

double BackwardEulerSystem::stabilization_energy(const Vector& u) const {
  return dot(u, mat_vec(stabilization_, u));
}

BackwardEulerSystem::StepResult BackwardEulerSystem::step(const FeFunction& prev,
                                                          double t_next) const {
  if (!(prev.mesh() == mesh())) throw MeshMismatch("BackwardEulerSystem::step: state on another mesh");
  const Vector forcing = forcing_at(t_next);
  const Vector& p = prev.coefficients();
  NewtonResult nr = newton_solve(
      [&](const Vector& x) { return residual(x, p, t_next, forcing); },
      [&](const Vector& x) { return jacobian(x); }, p, newton_.tol, newton_.max_iter);
  FeFunction next(mesh(), nr.x);
  return {std::move(next), std::move(nr)};
}

std::pair<FeFunction, StepDiagnostics> be_step(const FeFunction& prev, double t_next,
                                               const ModelParams& params,
                                               std::shared_ptr<const AssembledOperators> ops,
                                               std::shared_ptr<const FilterContext> filter,
                                               const Scenario& scenario, double dt,
                                               NewtonOptions newton) {
  const BackwardEulerSystem system(scenario, std::move(ops), std::move(filter), params, dt, newton);
  auto [rho, nr] = system.step(prev, t_next);
  StepDiagnostics d;
  d.t = t_next;
  d.l2_norm = mass_norm(system.operators().mass, rho);
  d.newton_iters = nr.iterations;
  d.newton_residual = nr.residual_norm;
  d.newton_threshold = nr.threshold;
  d.stab_dissipation = system.stabilization_energy(rho.coefficients());
  d.energy_E = energy_E(system.operators().mass, rho, prev);
  if (scenario.has_exact()) d.error = l2_error(rho, scenario.exact_solution, t_next);
  return {std::move(rho), d};
}

FeFunction time_filter_step(const FeFunction& rho_hat, const FeFunction& rho_n1,
                            const FeFunction& rho_n2, double gamma) {
  require_same_mesh(rho_hat, rho_n1, "time_filter_step");
  require_same_mesh(rho_hat, rho_n2, "time_filter_step");
  FeFunction out = rho_hat;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rho_hat[i] - 0.5 * gamma * (rho_hat[i] - 2.0 * rho_n1[i] + rho_n2[i]);
  }
  return out;
}

namespace {

FeFunction three_level(const FeFunction& a, const FeFunction& b, const FeFunction& c, double ca,
                       double cb, double cc, const char* where) {
  require_same_mesh(a, b, where);
  require_same_mesh(a, c, where);
  FeFunction out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ca * a[i] + cb * b[i] + cc * c[i];
  return out;
}

}  // namespace

FeFunction diff_op_D(const FeFunction& u_n, const FeFunction& u_n1, const FeFunction& u_n2) {
  return three_level(u_n, u_n1, u_n2, 1.5, -2.0, 0.5, "diff_op_D");
}

FeFunction interp_op_I(const FeFunction& u_n, const FeFunction& u_n1, const FeFunction& u_n2) {
  return three_level(u_n, u_n1, u_n2, 1.5, -1.0, 0.5, "interp_op_I");
}

double energy_E(const DenseMatrix& mass, const FeFunction& u_n, const FeFunction& u_n1) {
  require_same_mesh(u_n, u_n1, "energy_E");
  const Vector& a = u_n.coefficients();
  const Vector& b = u_n1.coefficients();
  const double n0 = mass_norm(mass, a);
  const double n1 = mass_norm(mass, 2.0 * a - b);
  const double n2 = mass_norm(mass, a - b);
  return 0.25 * (n0 * n0 + n1 * n1 + n2 * n2);
}

double energy_Z(const DenseMatrix& mass, const FeFunction& u_n, const FeFunction& u_n1,
                const FeFunction& u_n2) {
  const FeFunction combo = three_level(u_n, u_n1, u_n2, 1.0, -1.0, -1.0, "energy_Z");
  const double n = mass_norm(mass, combo);
  return 0.75 * n * n;
}

std::optional<double> Trajectory::max_error() const {
  std::optional<double> m;
  for (const auto& d : diagnostics) {
    if (d.error) m = std::max(m.value_or(0.0), *d.error);
  }
  return m;
}

int Trajectory::max_newton_iterations() const {
  int m = 0;
  for (const auto& d : diagnostics) m = std::max(m, d.newton_iters);
  return m;
}

namespace {

Trajectory run_impl(const BackwardEulerSystem& system, const TimeGrid& grid,
                    const RunOptions& options, bool time_filter) {
  const Scenario& scenario = system.scenario();
  const DenseMatrix& mass = system.operators().mass;
  const double gamma = system.params().gamma;
  const bool record_errors = options.record_errors && scenario.has_exact();

  std::set<int> wanted;
  for (double t : options.snapshot_times) {
    const long n = std::lround(t / grid.dt);
    if (n >= 0 && n <= grid.n_steps) wanted.insert(static_cast<int>(n));
  }

  Trajectory traj;
  traj.grid = grid;
  traj.diagnostics.reserve(grid.n_steps + 1);

  const FeFunction initial = l2_project(scenario.initial_condition, system.mesh());

  // Levels before 0 are taken equal to level 0 in E.
  auto record = [&](int n, const FeFunction& rho, const FeFunction& level1,
                    const FeFunction& level2, const NewtonResult* nr, double stab) {
    StepDiagnostics d;
    d.step = n;
    d.t = grid.time(n);
    d.l2_norm = mass_norm(mass, rho);
    d.energy_E = energy_E(mass, rho, level1);
    d.zeta_Z = n >= 2 ? energy_Z(mass, rho, level1, level2) : 0.0;
    d.stab_dissipation = stab;
    if (nr) {
      d.newton_iters = nr->iterations;
      d.newton_residual = nr->residual_norm;
      d.newton_threshold = nr->threshold;
    }
    if (record_errors) d.error = l2_error(rho, scenario.exact_solution, d.t);
    traj.diagnostics.push_back(d);
    if (options.keep_all_states || n == 0 || n == grid.n_steps || wanted.count(n) > 0) {
      traj.snapshots.push_back({n, d.t, rho});
    }
  };

  record(0, initial, initial, initial, nullptr,
         system.stabilization_energy(initial.coefficients()));

  FeFunction prev1 = initial;  // ρⁿ⁻¹
  FeFunction prev2 = initial;  // ρⁿ⁻²
  for (int n = 1; n <= grid.n_steps; ++n) {
    const double t = grid.time(n);
    std::optional<BackwardEulerSystem::StepResult> step;
    try {
      step.emplace(system.step(prev1, t));
    } catch (const Error& e) {
      throw StepFailure("step " + std::to_string(n) + " (t = " + std::to_string(t) +
                            "): " + e.what(),
                        n);
    }
    const double stab = system.stabilization_energy(step->rho.coefficients());
    FeFunction next = std::move(step->rho);
    if (time_filter && n >= 2 && gamma > 0.0) {
      next = time_filter_step(next, prev1, prev2, gamma);
      system.impose_boundary(next, t);
    }
    record(n, next, prev1, prev2, &step->newton, stab);
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  return traj;
}

}  // namespace

Trajectory run_algorithm1(const BackwardEulerSystem& system, const TimeGrid& grid,
                          const RunOptions& options) {
  return run_impl(system, grid, options, false);
}

Trajectory run_algorithm2(const BackwardEulerSystem& system, const TimeGrid& grid,
                          const RunOptions& options) {
  return run_impl(system, grid, options, true);
}

Trajectory run_algorithm(int algorithm, const BackwardEulerSystem& system, const TimeGrid& grid,
                         const RunOptions& options) {
  if (algorithm == 1) return run_algorithm1(system, grid, options);
  if (algorithm == 2) return run_algorithm2(system, grid, options);
  throw InvalidParameter("algorithm must be 1 or 2, got " + std::to_string(algorithm));
}

}  // namespace lwr
