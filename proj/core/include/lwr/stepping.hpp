#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lwr/filtering.hpp"
#include "lwr/linalg.hpp"
#include "lwr/mesh.hpp"
#include "lwr/operators.hpp"
#include "lwr/params.hpp"
#include "lwr/scenarios.hpp"

namespace lwr {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 25;
};

struct NewtonResult {
  Vector x;
  int iterations = 0;
  double residual_norm = 0.0;
  /// Absolute stopping threshold tol · max(1, ‖r(guess)‖).
  double threshold = 0.0;
};

using ResidualFunction = std::function<Vector(const Vector&)>;
using JacobianFunction = std::function<DenseMatrix(const Vector&)>;

/// Full Newton iteration. Stops when ‖r(x)‖₂ ≤ tol · max(1, ‖r(guess)‖₂).
/// Throws NoConvergence after max_iter iterations and propagates
/// SingularMatrix from the linear solves.
NewtonResult newton_solve(const ResidualFunction& residual, const JacobianFunction& jacobian,
                          Vector guess, double tol, int max_iter);

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;
  double l2_norm = 0.0;           ///< ‖ρⁿ‖ in the mass-weighted norm
  double energy_E = 0.0;
  double zeta_Z = 0.0;
  int newton_iters = 0;
  double stab_dissipation = 0.0;  ///< χδ²‖∂x u*‖² of the implicitly solved state
  double newton_residual = 0.0;
  double newton_threshold = 0.0;
  std::optional<double> error;    ///< ‖ρⁿ − ρ(tⁿ)‖ when the exact solution is known
};

/// The discrete backward Euler problem for one scenario, mesh, parameter set
/// and step size. Owns the time-independent matrices.
///
/// Residual of one step, ρ unknown and ρ_prev the previous level:
///   R(ρ) = M(ρ − ρ_prev)/Δt + v_f Cρ − (2v_f/ρ_m) b(ρ, ρ, ·) + A_stab ρ − F(t)
/// with constrained boundary rows replaced by ρ_i − g(x_i, t).
class BackwardEulerSystem {
 public:
  BackwardEulerSystem(const Scenario& scenario, const Mesh1D& mesh, const ModelParams& params,
                      double dt, NewtonOptions newton = {});
  BackwardEulerSystem(const Scenario& scenario, std::shared_ptr<const AssembledOperators> ops,
                      std::shared_ptr<const FilterContext> filter, const ModelParams& params,
                      double dt, NewtonOptions newton = {});

  const Mesh1D& mesh() const noexcept { return ops_->mesh; }
  const AssembledOperators& operators() const noexcept { return *ops_; }
  const FilterContext& filter() const noexcept { return *filter_; }
  const ModelParams& params() const noexcept { return params_; }
  const Scenario& scenario() const noexcept { return scenario_; }
  const DenseMatrix& stabilization() const noexcept { return stabilization_; }
  double dt() const noexcept { return dt_; }
  const std::vector<std::size_t>& constrained_dofs() const noexcept { return constrained_; }

  /// v_f Cu − (2v_f/ρ_m) b(u, u, ·) + A_stab u − F(t), no boundary rows replaced.
  Vector spatial_residual(const Vector& u, double t) const;
  /// Full step residual including boundary row replacement.
  Vector residual(const Vector& rho, const Vector& prev, double t_next) const;
  Vector residual(const Vector& rho, const Vector& prev, double t_next,
                  const Vector& forcing) const;
  DenseMatrix jacobian(const Vector& rho) const;

  /// Sets constrained DOFs to the boundary data at time t.
  void impose_boundary(FeFunction& rho, double t) const;

  /// χδ²‖∂x u*‖² = uᵀ A_stab u.
  double stabilization_energy(const Vector& u) const;

  struct StepResult {
    FeFunction rho;
    NewtonResult newton;
  };
  /// One implicit step from prev to t_next. Newton starts at prev.
  StepResult step(const FeFunction& prev, double t_next) const;

 private:
  Vector forcing_at(double t) const;

  Scenario scenario_;
  std::shared_ptr<const AssembledOperators> ops_;
  std::shared_ptr<const FilterContext> filter_;
  ModelParams params_;
  double dt_;
  NewtonOptions newton_;
  DenseMatrix stabilization_;
  DenseMatrix linear_part_;  ///< M/Δt + v_f C + A_stab
  std::vector<std::size_t> constrained_;
};

/// Single backward Euler step as a free function.
std::pair<FeFunction, StepDiagnostics> be_step(const FeFunction& prev, double t_next,
                                               const ModelParams& params,
                                               std::shared_ptr<const AssembledOperators> ops,
                                               std::shared_ptr<const FilterContext> filter,
                                               const Scenario& scenario, double dt,
                                               NewtonOptions newton = {});

/// ρ̂ − (γ/2)(ρ̂ − 2ρⁿ⁻¹ + ρⁿ⁻²)
FeFunction time_filter_step(const FeFunction& rho_hat, const FeFunction& rho_n1,
                            const FeFunction& rho_n2, double gamma);

/// D[u] = (3/2)uⁿ − 2uⁿ⁻¹ + (1/2)uⁿ⁻²
FeFunction diff_op_D(const FeFunction& u_n, const FeFunction& u_n1, const FeFunction& u_n2);
/// I[u] = (3/2)uⁿ − uⁿ⁻¹ + (1/2)uⁿ⁻²
FeFunction interp_op_I(const FeFunction& u_n, const FeFunction& u_n1, const FeFunction& u_n2);

/// E = (1/4)(‖uⁿ‖² + ‖2uⁿ − uⁿ⁻¹‖² + ‖uⁿ − uⁿ⁻¹‖²), mass-weighted norms.
double energy_E(const DenseMatrix& mass, const FeFunction& u_n, const FeFunction& u_n1);
/// Z = (3/4)‖uⁿ − uⁿ⁻¹ − uⁿ⁻²‖², mass-weighted norm.
double energy_Z(const DenseMatrix& mass, const FeFunction& u_n, const FeFunction& u_n1,
                const FeFunction& u_n2);

struct Snapshot {
  int step = 0;
  double t = 0.0;
  FeFunction rho;
};

struct Trajectory {
  TimeGrid grid;
  std::vector<StepDiagnostics> diagnostics;  ///< one entry per level n = 0..M
  std::vector<Snapshot> snapshots;           ///< every level, or only requested ones

  const FeFunction& final_state() const { return snapshots.back().rho; }
  /// Max of the per-step errors; nullopt when no exact solution was available.
  std::optional<double> max_error() const;
  int max_newton_iterations() const;
};

struct RunOptions {
  NewtonOptions newton{};
  /// Store every level. When false only the initial state, the final state
  /// and the levels nearest to snapshot_times are kept.
  bool keep_all_states = true;
  std::vector<double> snapshot_times;
  /// Record the L² error against the scenario's exact solution at every level.
  bool record_errors = true;
};

/// Backward Euler for n = 1..M from the L² projection of the initial data.
Trajectory run_algorithm1(const BackwardEulerSystem& system, const TimeGrid& grid,
                          const RunOptions& options = {});

/// Backward Euler followed by the time filter with weight params.gamma for
/// n ≥ 2; level 1 comes from one plain backward Euler step. Constrained
/// boundary DOFs are reset to the boundary data after filtering.
Trajectory run_algorithm2(const BackwardEulerSystem& system, const TimeGrid& grid,
                          const RunOptions& options = {});

/// Dispatches on algorithm ∈ {1, 2}.
Trajectory run_algorithm(int algorithm, const BackwardEulerSystem& system, const TimeGrid& grid,
                         const RunOptions& options = {});

}  // namespace lwr
