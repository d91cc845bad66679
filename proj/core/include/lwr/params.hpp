#pragma once

namespace lwr {

/// Physical and numerical parameters of the stabilized LWR model
/// ρ_t + (v_f − 2 v_f ρ / ρ_m) ρ_x = f.
struct ModelParams {
  double v_f = 1.0;        ///< free-flow speed
  double rho_m = 1.0;      ///< maximum (jam) density
  double chi = 0.0;        ///< stabilization weight
  double delta = 0.0;      ///< filter radius
  int deconv_order = 1;    ///< van Cittert order N
  double gamma = 0.0;      ///< time-filter weight; 2/3 gives the second-order filter

  /// Throws InvalidParameter when any field is out of range.
  void validate() const;
};

/// Filter radius tied to the mesh size: δ = coeff · h^exponent.
struct DeltaRule {
  double coeff = 1.0;
  double exponent = 0.5;

  double operator()(double h) const;
  void validate() const;
};

/// Uniform time grid t^n = n·dt, n = 0..n_steps.
struct TimeGrid {
  double dt = 0.0;
  int n_steps = 0;

  double t_final() const noexcept { return dt * n_steps; }
  double time(int n) const noexcept { return dt * n; }

  /// Builds the grid with n_steps = T/dt; throws InvalidParameter unless T is
  /// an integer multiple of dt to within 1e-12.
  static TimeGrid from_final_time(double t_final, double dt);
};

}  // namespace lwr
