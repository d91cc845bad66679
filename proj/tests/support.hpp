#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "lwr/linalg.hpp"
#include "lwr/mesh.hpp"

namespace lwr::testing {

inline constexpr double kPi = std::numbers::pi;

inline Vector random_vector(std::mt19937& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline DenseMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DenseMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = dist(rng);
  return a;
}

/// Random matrix made well conditioned by a dominant diagonal.
inline DenseMatrix random_well_conditioned(std::mt19937& rng, std::size_t n) {
  DenseMatrix a = random_matrix(rng, n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

inline FeFunction random_function(std::mt19937& rng, const Mesh1D& mesh) {
  return FeFunction(mesh, random_vector(rng, mesh.n_dofs()));
}

/// Smooth random periodic data on [0, 1]: a few random Fourier modes.
inline SpaceFunction random_smooth_periodic(std::mt19937& rng) {
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  const double a0 = 0.5 + amp(rng);
  const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
  const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
  return [=](double x) {
    return a0 + a1 * std::sin(2 * kPi * x + p1) + a2 * std::sin(4 * kPi * x + p2) +
           0.5 * a3 * std::sin(6 * kPi * x + p3);
  };
}

/// High-order composite Gauss integral of g over [a, b], independent of the
/// meshes under test.
template <class F>
double integrate(F&& g, double a, double b, int panels = 400) {
  const QuadratureRule q = gauss_legendre(8);
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p)
    for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * w * g(a + (p + q.points[k]) * w);
  return s;
}

/// ∫ a⁽ᵈᵃ⁾ b⁽ᵈᵇ⁾ c⁽ᵈᶜ⁾ over the mesh of a, each factor either the value or the
/// derivative, by a 6-point Gauss rule per element (exact for the products of
/// P1/P2 functions involved).
inline double product_integral(const FeFunction& a, bool da, const FeFunction& b, bool db,
                               const FeFunction& c, bool dc) {
  const QuadratureRule q = gauss_legendre(6);
  const Mesh1D& m = a.mesh();
  double s = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto [av, ad] = a.element_eval(e, q.points[k]);
      const auto [bv, bd] = b.element_eval(e, q.points[k]);
      const auto [cv, cd] = c.element_eval(e, q.points[k]);
      s += q.weights[k] * m.h() * (da ? ad : av) * (db ? bd : bv) * (dc ? cd : cv);
    }
  }
  return s;
}

}  // namespace lwr::testing
