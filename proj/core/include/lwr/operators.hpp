#pragma once

#include "lwr/linalg.hpp"
#include "lwr/mesh.hpp"

namespace lwr {

/// Coefficient-space matrices of the Galerkin formulation. Row index is the
/// test function, column index the trial function:
///   mass(i, j)       = (φ_j, φ_i)
///   stiffness(i, j)  = (∂x φ_j, ∂x φ_i)
///   convection(i, j) = (∂x φ_j, φ_i)
struct AssembledOperators {
  Mesh1D mesh;
  DenseMatrix mass;
  DenseMatrix stiffness;
  DenseMatrix convection;
};

AssembledOperators assemble(const Mesh1D& mesh);

/// Entries (f(·, t), φ_i).
Vector forcing_vector(const SpaceTimeFunction& f, double t, const Mesh1D& mesh);

/// Skew-symmetric trilinear form b(u, v, w) = (1/3)∫(∂x(uv) + u ∂x v) w dx,
/// integrated in the expanded form (1/3)∫(u'v + 2uv')w.
double b_form(const FeFunction& u, const FeFunction& v, const FeFunction& w);

/// Vector with entries b(ρ, ρ, φ_i).
Vector b_residual(const FeFunction& rho);

/// Jacobian of b_residual: J(i, j) = b(φ_j, ρ, φ_i) + b(ρ, φ_j, φ_i).
DenseMatrix b_jacobian(const FeFunction& rho);

/// Accumulates scale · b_jacobian(rho) into `out` without allocating.
void add_b_jacobian(const FeFunction& rho, double scale, DenseMatrix& out);

/// √(uᵀ M u), the discrete L² norm of a coefficient vector.
double mass_norm(const DenseMatrix& mass, const Vector& u);
double mass_norm(const DenseMatrix& mass, const FeFunction& u);

}  // namespace lwr
