#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lwr/mesh.hpp"

namespace lwr {

struct Trajectory;

/// ‖ρ_h − exact(·, t)‖ in L²(Ω), 5-point Gauss rule per element.
double l2_error(const FeFunction& rho_h, const SpaceTimeFunction& exact, double t);

/// Discrete ℓ∞(0, T; L²) error: max over every stored state of l2_error.
double triple_norm_inf(const Trajectory& trajectory, const SpaceTimeFunction& exact);

struct ConvergenceRow {
  std::string label;          ///< e.g. "1/48"
  double resolution = 0.0;    ///< h or Δt
  double error = 0.0;
  std::optional<double> rate; ///< log₂(e_{i−1}/e_i); absent on the first row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string metadata;
};

struct LadderEntry {
  std::string label;
  double resolution = 0.0;
  double error = 0.0;
};

/// Rates between consecutive rungs. Requires ≥ 2 rows whose resolutions halve
/// (within 1e-9 relative); throws NonHalvingLadder otherwise. Errors must be > 0.
ConvergenceTable convergence_table(const std::vector<LadderEntry>& entries);

/// Σ |ρ(x_{i+1}) − ρ(x_i)| over nodal values in increasing x.
double total_variation(const FeFunction& rho_h);

/// max(0, max nodal value − reference_max).
double overshoot(const FeFunction& rho_h, double reference_max);

}  // namespace lwr
