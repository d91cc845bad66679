#include "lwr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lwr/errors.hpp"
#include "lwr/stepping.hpp"

namespace lwr {

double l2_error(const FeFunction& rho_h, const SpaceTimeFunction& exact, double t) {
  const Mesh1D& mesh = rho_h.mesh();
  const QuadratureRule& q = error_quadrature();
  const double h = mesh.h();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double x0 = mesh.element_left(e);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double diff = rho_h.element_eval(e, q.points[k]).first - exact(x0 + q.points[k] * h, t);
      sum += q.weights[k] * h * diff * diff;
    }
  }
  return std::sqrt(sum);
}

double triple_norm_inf(const Trajectory& trajectory, const SpaceTimeFunction& exact) {
  double m = 0.0;
  for (const Snapshot& s : trajectory.snapshots) m = std::max(m, l2_error(s.rho, exact, s.t));
  return m;
}

ConvergenceTable convergence_table(const std::vector<LadderEntry>& entries) {
  if (entries.size() < 2) throw NonHalvingLadder("convergence_table: need at least two rungs");
  ConvergenceTable table;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const LadderEntry& e = entries[i];
    if (!(e.error > 0.0)) {
      throw InvalidParameter("convergence_table: error on rung '" + e.label + "' is not positive");
    }
    ConvergenceRow row{e.label, e.resolution, e.error, std::nullopt};
    if (i > 0) {
      const LadderEntry& p = entries[i - 1];
      const double ratio = p.resolution / e.resolution;
      if (std::abs(ratio - 2.0) > 2e-9) {
        throw NonHalvingLadder("convergence_table: rung '" + e.label + "' does not halve '" +
                               p.label + "'");
      }
      row.rate = std::log2(p.error / e.error);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double total_variation(const FeFunction& rho_h) {
  double tv = 0.0;
  for (std::size_t i = 1; i < rho_h.size(); ++i) tv += std::abs(rho_h[i] - rho_h[i - 1]);
  return tv;
}

double overshoot(const FeFunction& rho_h, double reference_max) {
  const auto& c = rho_h.coefficients();
  const double peak = *std::max_element(c.begin(), c.end());
  return std::max(0.0, peak - reference_max);
}

}  // namespace lwr
