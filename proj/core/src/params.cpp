#include "lwr/params.hpp"

#include <cmath>
#include <string>

#include "lwr/errors.hpp"

namespace lwr {

void ModelParams::validate() const {
  if (!(v_f > 0.0)) throw InvalidParameter("v_f must be > 0");
  if (!(rho_m > 0.0)) throw InvalidParameter("rho_m must be > 0");
  if (chi < 0.0) throw NegativeChi("chi must be >= 0, got " + std::to_string(chi));
  if (!(delta >= 0.0)) throw InvalidParameter("delta must be >= 0");
  if (deconv_order < 0) throw InvalidParameter("deconv_order must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidParameter("gamma must lie in [0, 1)");
}

double DeltaRule::operator()(double h) const { return coeff * std::pow(h, exponent); }

void DeltaRule::validate() const {
  if (!(coeff >= 0.0)) throw InvalidParameter("delta_coeff must be >= 0");
  if (!(exponent >= 0.0 && exponent <= 1.0)) throw InvalidParameter("delta_exponent must lie in [0, 1]");
}

TimeGrid TimeGrid::from_final_time(double t_final, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
  if (!(t_final >= 0.0)) throw InvalidParameter("t_final must be >= 0");
  const double steps = std::round(t_final / dt);
  TimeGrid grid{dt, static_cast<int>(steps)};
  if (std::abs(grid.t_final() - t_final) > 1e-12) {
    throw InvalidParameter("t_final = " + std::to_string(t_final) +
                           " is not an integer multiple of dt = " + std::to_string(dt));
  }
  return grid;
}

}  // namespace lwr
