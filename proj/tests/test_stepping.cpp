#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lwr/analysis.hpp"
#include "lwr/errors.hpp"
#include "lwr/stepping.hpp"
#include "support.hpp"

namespace lwr {
namespace {

using testing::kPi;
using testing::random_function;

TEST(Newton, AffineResidualConvergesInOneIteration) {
  const DenseMatrix a{{3, 1}, {1, 2}};
  const Vector b{1, -1};
  const NewtonResult r = newton_solve([&](const Vector& x) { return mat_vec(a, x) - b; },
                                      [&](const Vector&) { return a; }, Vector{10, -7}, 1e-10, 25);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_NEAR(r.x[0], 0.6, 1e-12);
  EXPECT_NEAR(r.x[1], -0.8, 1e-12);
}

TEST(Newton, RootAsGuessTakesNoIterations) {
  const NewtonResult r = newton_solve([](const Vector& x) { return Vector{x[0] * x[0] - 4}; },
                                      [](const Vector& x) { return DenseMatrix{{2 * x[0]}}; },
                                      Vector{2.0}, 1e-10, 25);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.x[0], 2.0);
}

TEST(Newton, ScalarSquareRoot) {
  const NewtonResult r = newton_solve([](const Vector& x) { return Vector{x[0] * x[0] - 4}; },
                                      [](const Vector& x) { return DenseMatrix{{2 * x[0]}}; },
                                      Vector{3.0}, 1e-10, 25);
  EXPECT_NEAR(r.x[0], 2.0, 1e-10);
  EXPECT_LE(r.iterations, 6);
  // Hand iteration: 3 → 13/6 → 313/156 → ...
  const NewtonResult one = newton_solve([](const Vector& x) { return Vector{x[0] * x[0] - 4}; },
                                        [](const Vector& x) { return DenseMatrix{{2 * x[0]}}; },
                                        Vector{3.0}, 0.5, 25);
  EXPECT_EQ(one.iterations, 1);
  EXPECT_NEAR(one.x[0], 13.0 / 6.0, 1e-15);
}

TEST(Newton, FailureModes) {
  auto res = [](const Vector& x) { return Vector{x[0] * x[0] + 1}; };
  auto jac = [](const Vector& x) { return DenseMatrix{{2 * x[0]}}; };
  try {
    newton_solve(res, jac, Vector{0.5}, 1e-10, 5);
    FAIL() << "expected NoConvergence";
  } catch (const NoConvergence& e) {
    EXPECT_EQ(e.iterations(), 5);
    EXPECT_GT(e.residual_norm(), 0.0);
  }
  EXPECT_THROW(newton_solve(res, jac, Vector{0.0}, 1e-10, 5), SingularMatrix);
  EXPECT_THROW(newton_solve(res, jac, Vector{1.0}, 0.0, 5), InvalidParameter);
}

std::shared_ptr<const AssembledOperators> shared_ops(const Mesh1D& m) {
  return std::make_shared<const AssembledOperators>(assemble(m));
}

TEST(BeStep, ConstantsAreSteadyOnPeriodicMeshes) {
  const Mesh1D m = build_mesh(0, 1, 16, 2, BoundaryKind::Periodic);
  const Scenario s = periodic_transport([](double) { return 0.3; });
  ModelParams p;
  p.chi = 1.0;
  p.delta = 0.2;
  const FeFunction c(m, Vector(m.n_dofs(), 0.3));
  const auto [next, diag] = be_step(c, 0.1, p, shared_ops(m), nullptr, s, 0.1);
  EXPECT_LE(norm_inf(next.coefficients() - c.coefficients()), 1e-14);
  EXPECT_EQ(diag.newton_iters, 0);
}

TEST(BeStep, NormDoesNotGrowOnPeriodicMeshes) {
  std::mt19937 rng(31);
  const Mesh1D m = build_mesh(0, 1, 20, 2, BoundaryKind::Periodic);
  auto ops = shared_ops(m);
  const Scenario s = periodic_transport([](double) { return 0.0; });
  for (double chi : {0.0, 1.0}) {
    ModelParams p;
    p.chi = chi;
    p.delta = std::sqrt(m.h());
    for (int k = 0; k < 10; ++k) {
      FeFunction prev = random_function(rng, m);
      prev *= 0.4;
      const auto [next, diag] = be_step(prev, 0.05, p, ops, nullptr, s, 0.05);
      EXPECT_LE(diag.l2_norm, mass_norm(ops->mass, prev) * (1 + 1e-10));
    }
  }
}

TEST(BeStep, OneStepErrorShrinksWithTheStep) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 100, 2, BoundaryKind::Dirichlet);
  auto ops = shared_ops(m);
  ModelParams p;
  p.delta = 0.1 * std::sqrt(m.h());
  const FeFunction start = l2_project(s.initial_condition, m);
  double err[2];
  int idx = 0;
  for (double dt : {0.02, 0.01}) {
    const auto [next, diag] = be_step(start, dt, p, ops, nullptr, s, dt);
    err[idx++] = l2_error(next, s.exact_solution, dt);
    ASSERT_TRUE(diag.error.has_value());
    EXPECT_DOUBLE_EQ(*diag.error, err[idx - 1]);
  }
  // At least first order in Δt once the spatial error is negligible.
  EXPECT_GE(err[0] / err[1], 2.0);
}

TEST(BeStep, MeshMismatch) {
  const Mesh1D m = build_mesh(0, 1, 8, 1, BoundaryKind::Periodic);
  const Scenario s = periodic_transport([](double) { return 0.0; });
  const FeFunction other(build_mesh(0, 1, 9, 1, BoundaryKind::Periodic));
  EXPECT_THROW(be_step(other, 0.1, ModelParams{}, shared_ops(m), nullptr, s, 0.1), MeshMismatch);
}

FeFunction constant(const Mesh1D& m, double c) { return FeFunction(m, Vector(m.n_dofs(), c)); }

TEST(TimeFilter, Arithmetic) {
  const Mesh1D m = build_mesh(0, 1, 4, 1, BoundaryKind::Periodic);
  const double g = 2.0 / 3.0;
  const FeFunction a = constant(m, 0.8);
  EXPECT_EQ(time_filter_step(a, a, a, g).coefficients(), a.coefficients());
  const FeFunction linear = time_filter_step(constant(m, 3), constant(m, 2), constant(m, 1), g);
  EXPECT_NEAR(linear[0], 3.0, 1e-15);
  const FeFunction kick = time_filter_step(constant(m, 1), constant(m, 0), constant(m, 0), g);
  EXPECT_NEAR(kick[2], 2.0 / 3.0, 1e-15);
  EXPECT_THROW(time_filter_step(a, constant(build_mesh(0, 1, 5, 1, BoundaryKind::Periodic), 0), a, g),
               MeshMismatch);
}

TEST(ThreeLevelOperators, Values) {
  const Mesh1D m = build_mesh(0, 1, 4, 2, BoundaryKind::Dirichlet);
  std::mt19937 rng(32);
  const FeFunction u = random_function(rng, m);
  EXPECT_LE(norm_inf(interp_op_I(u, u, u).coefficients() - u.coefficients()), 1e-15);
  EXPECT_LE(norm_inf(diff_op_D(u, u, u).coefficients()), 1e-15);
  EXPECT_NEAR(interp_op_I(constant(m, 3), constant(m, 2), constant(m, 1))[0], 3.0, 1e-15);
  EXPECT_NEAR(diff_op_D(constant(m, 3), constant(m, 2), constant(m, 1))[0], 1.0, 1e-15);
  EXPECT_THROW(diff_op_D(u, u, constant(build_mesh(0, 1, 5, 2, BoundaryKind::Dirichlet), 0)),
               MeshMismatch);
}

TEST(Energies, Values) {
  const Mesh1D m = build_mesh(0, 1, 6, 2, BoundaryKind::Dirichlet);
  const DenseMatrix mass = mass_matrix(m);
  const FeFunction zero(m);
  EXPECT_EQ(energy_E(mass, zero, zero), 0.0);
  EXPECT_EQ(energy_Z(mass, zero, zero, zero), 0.0);

  std::mt19937 rng(33);
  const FeFunction u = random_function(rng, m);
  const double nu = mass_norm(mass, u);
  EXPECT_NEAR(energy_E(mass, u, u), 0.5 * nu * nu, 1e-14);

  const FeFunction v = random_function(rng, m);
  EXPECT_NEAR(energy_Z(mass, u + v, u, v), 0.0, 1e-14);
  EXPECT_GT(energy_Z(mass, u, v, u), 0.0);
}

TEST(Energies, ThreeLevelIdentity) {
  // (3a/2 − 2b + c/2)(3a/2 − b + c/2) = E(a, b) − E(b, c) + (3/4)(a − 2b + c)²
  auto e = [](double a, double b) { return 0.25 * (a * a + (2 * a - b) * (2 * a - b) + (a - b) * (a - b)); };
  std::mt19937 rng(34);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int k = 0; k < 1000; ++k) {
    const double a = d(rng), b = d(rng), c = d(rng);
    const double lhs = (1.5 * a - 2 * b + 0.5 * c) * (1.5 * a - b + 0.5 * c);
    const double rhs = e(a, b) - e(b, c) + 0.75 * (a - 2 * b + c) * (a - 2 * b + c);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1 + std::abs(lhs)));
  }
}

TEST(RunAlgorithm1, ZeroStepsGivesProjection) {
  const Scenario s = periodic_transport([](double x) { return 0.5 + 0.2 * std::sin(2 * kPi * x); });
  const Mesh1D m = build_mesh(0, 1, 12, 1, BoundaryKind::Periodic);
  const BackwardEulerSystem sys(s, m, ModelParams{}, 0.1);
  const Trajectory t = run_algorithm1(sys, TimeGrid{0.1, 0});
  ASSERT_EQ(t.snapshots.size(), 1u);
  ASSERT_EQ(t.diagnostics.size(), 1u);
  const FeFunction proj = l2_project(s.initial_condition, m);
  EXPECT_EQ(t.final_state().coefficients(), proj.coefficients());
  EXPECT_FALSE(t.max_error().has_value());
}

TEST(RunAlgorithm1, EnergyInequalityOnPeriodicRuns) {
  std::mt19937 rng(35);
  const Mesh1D m = build_mesh(0, 1, 24, 2, BoundaryKind::Periodic);
  auto ops = shared_ops(m);
  for (double chi : {0.0, 0.5, 1.0}) {
    ModelParams p;
    p.chi = chi;
    p.delta = std::sqrt(m.h());
    const Scenario s = periodic_transport(testing::random_smooth_periodic(rng));
    const BackwardEulerSystem sys(s, ops, nullptr, p, 0.02);
    const Trajectory t = run_algorithm1(sys, TimeGrid{0.02, 40});
    double dissipated = 0.0;
    for (std::size_t n = 1; n < t.diagnostics.size(); ++n) {
      dissipated += t.diagnostics[n].stab_dissipation;
      EXPECT_LE(t.diagnostics[n].l2_norm, t.diagnostics[n - 1].l2_norm * (1 + 1e-10));
    }
    const double n0 = t.diagnostics.front().l2_norm;
    const double nM = t.diagnostics.back().l2_norm;
    EXPECT_LE(nM * nM + 2 * 0.02 * dissipated, n0 * n0 * (1 + 1e-9)) << "chi " << chi;
  }
}

TEST(RunAlgorithm1, FirstBackwardEulerRungMatchesReference) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 100, 2, BoundaryKind::Dirichlet);
  ModelParams p;
  p.delta = 0.1 * std::sqrt(m.h());
  const BackwardEulerSystem sys(s, m, p, 0.1);
  const Trajectory t = run_algorithm1(sys, TimeGrid::from_final_time(1.0, 0.1));
  EXPECT_NEAR(*t.max_error(), 1.97e-2, 0.25 * 1.97e-2);
  EXPECT_EQ(t.diagnostics.size(), 11u);
}

TEST(RunAlgorithm1, DirichletValuesExactEveryStep) {
  const Scenario s = shock();
  const Mesh1D m = build_mesh(0, 1, 32, 1, BoundaryKind::Dirichlet);
  ModelParams p;
  p.chi = 1.0;
  p.delta = std::sqrt(m.h());
  p.deconv_order = 0;
  const BackwardEulerSystem sys(s, m, p, 1e-3);
  const Trajectory t = run_algorithm1(sys, TimeGrid{1e-3, 50});
  for (const Snapshot& snap : t.snapshots) {
    if (snap.step == 0) continue;
    EXPECT_NEAR(snap.rho[0], 0.25, 1e-12);
  }
}

TEST(RunAlgorithm1, StepFailureCarriesStepIndex) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 10, 1, BoundaryKind::Dirichlet);
  const BackwardEulerSystem sys(s, m, ModelParams{}, 0.1, NewtonOptions{1e-10, 0});
  try {
    run_algorithm1(sys, TimeGrid{0.1, 3});
    FAIL() << "expected StepFailure";
  } catch (const StepFailure& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(RunAlgorithm2, FirstFilteredRungAndRate) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 100, 2, BoundaryKind::Dirichlet);
  auto ops = shared_ops(m);
  ModelParams p;
  p.delta = 0.1 * std::sqrt(m.h());
  p.gamma = 2.0 / 3.0;
  RunOptions opts;
  opts.keep_all_states = false;
  double err[2];
  int idx = 0;
  for (double dt : {0.1, 0.05}) {
    const BackwardEulerSystem sys(s, ops, nullptr, p, dt);
    err[idx++] = *run_algorithm2(sys, TimeGrid::from_final_time(1.0, dt), opts).max_error();
  }
  EXPECT_NEAR(err[1], 1.26e-3, 0.25 * 1.26e-3);
  EXPECT_NEAR(std::log2(err[0] / err[1]), 1.95, 0.1);
}

TEST(RunAlgorithm2, ZeroGammaMatchesAlgorithm1) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 20, 2, BoundaryKind::Dirichlet);
  ModelParams p;
  p.chi = 1.0;
  p.delta = 0.1 * std::sqrt(m.h());
  const BackwardEulerSystem sys(s, m, p, 0.05);
  const Trajectory a = run_algorithm1(sys, TimeGrid{0.05, 10});
  const Trajectory b = run_algorithm2(sys, TimeGrid{0.05, 10});
  EXPECT_LE(norm_inf(a.final_state().coefficients() - b.final_state().coefficients()), 1e-12);
}

TEST(RunAlgorithm2, EquivalentOneStepSchemeResidual) {
  const Scenario s = manufactured();
  const Mesh1D m = build_mesh(0, 1, 16, 2, BoundaryKind::Dirichlet);
  ModelParams p;
  p.chi = 1.0;
  p.delta = 0.1 * std::sqrt(m.h());
  p.gamma = 2.0 / 3.0;
  const double dt = 0.02;
  const BackwardEulerSystem sys(s, m, p, dt);
  const Trajectory t = run_algorithm2(sys, TimeGrid{dt, 20});
  const auto& mass = sys.operators().mass;
  for (int n = 2; n <= 20; ++n) {
    const FeFunction& a = t.snapshots[n].rho;
    const FeFunction& b = t.snapshots[n - 1].rho;
    const FeFunction& c = t.snapshots[n - 2].rho;
    Vector r = (1.0 / dt) * mat_vec(mass, diff_op_D(a, b, c).coefficients());
    r += sys.spatial_residual(interp_op_I(a, b, c).coefficients(), t.snapshots[n].t);
    for (std::size_t i : sys.constrained_dofs()) r[i] = 0.0;
    EXPECT_LE(norm2(r), 10 * t.diagnostics[n].newton_threshold) << "step " << n;
  }
}

TEST(RunAlgorithm2, PeriodicRunsStayBoundedAndDissipateE) {
  std::mt19937 rng(36);
  const Mesh1D m = build_mesh(0, 1, 24, 2, BoundaryKind::Periodic);
  auto ops = shared_ops(m);
  ModelParams p;
  p.chi = 0.5;
  p.delta = std::sqrt(m.h());
  p.gamma = 2.0 / 3.0;
  const Scenario s = periodic_transport(testing::random_smooth_periodic(rng));
  const BackwardEulerSystem sys(s, ops, nullptr, p, 0.02);
  const Trajectory t = run_algorithm2(sys, TimeGrid{0.02, 40});
  const double bound = 10 * (t.diagnostics[0].l2_norm + t.diagnostics[1].l2_norm);
  for (std::size_t n = 1; n < t.diagnostics.size(); ++n) {
    EXPECT_LE(t.diagnostics[n].l2_norm, bound);
    EXPECT_LE(t.diagnostics[n].energy_E, t.diagnostics[n - 1].energy_E * (1 + 1e-10) + 1e-14)
        << "step " << n;
    EXPECT_GE(t.diagnostics[n].zeta_Z, 0.0);
  }
}

TEST(Trajectory, SnapshotSelection) {
  const Scenario s = periodic_transport([](double x) { return 0.5 + 0.1 * std::cos(2 * kPi * x); });
  const Mesh1D m = build_mesh(0, 1, 8, 1, BoundaryKind::Periodic);
  const BackwardEulerSystem sys(s, m, ModelParams{}, 0.1);
  RunOptions o;
  o.keep_all_states = false;
  o.snapshot_times = {0.3};
  const Trajectory t = run_algorithm1(sys, TimeGrid{0.1, 6}, o);
  ASSERT_EQ(t.snapshots.size(), 3u);
  EXPECT_EQ(t.snapshots[1].step, 3);
  EXPECT_EQ(t.diagnostics.size(), 7u);
}

TEST(ModelParams, Validation) {
  ModelParams p;
  p.gamma = 1.0;
  EXPECT_THROW(p.validate(), InvalidParameter);
  p.gamma = 0.0;
  p.chi = -1;
  EXPECT_THROW(p.validate(), NegativeChi);
  p.chi = 0;
  p.v_f = 0;
  EXPECT_THROW(p.validate(), InvalidParameter);
}

TEST(TimeGrid, FromFinalTime) {
  const TimeGrid g = TimeGrid::from_final_time(1.0, 1.0 / 160);
  EXPECT_EQ(g.n_steps, 160);
  EXPECT_NEAR(g.t_final(), 1.0, 1e-12);
  EXPECT_THROW(TimeGrid::from_final_time(1.0, 0.3), InvalidParameter);
}

}  // namespace
}  // namespace lwr
