#pragma once

#include <memory>

#include "lwr/linalg.hpp"
#include "lwr/mesh.hpp"
#include "lwr/operators.hpp"

namespace lwr {

/// How the filter problem treats the end points of a non-periodic mesh.
enum class FilterBoundary {
  Natural,  ///< no constraint; the filter is posed on every DOF
  Clamped,  ///< ū = u at both end DOFs
  Zero,     ///< ū = 0 at both end DOFs
};

/// Discrete differential filter, van Cittert deconvolution and the
/// fluctuation operator on one mesh, precomputed as dense matrices.
///
/// The filtered ū of u solves δ²(∂x ū, ∂x v) + (ū, v) = (u, v) for every v in
/// the finite element space; in coefficients (M + δ²S) ū = M u, i.e. ū = F u
/// with F = (M + δ²S)⁻¹ M. Deconvolution of order N is D_N = Σ_{n=0}^{N} (I − F)ⁿ
/// and the fluctuation is u* = u − D_N F u = Π u.
///
/// By default the filter is posed on every DOF with natural boundary
/// conditions, also on Dirichlet meshes. Periodic meshes ignore `boundary`.
class FilterContext {
 public:
  FilterContext(const AssembledOperators& ops, double delta, int deconv_order,
                FilterBoundary boundary = FilterBoundary::Natural);

  double delta() const noexcept { return delta_; }
  int deconv_order() const noexcept { return deconv_order_; }
  FilterBoundary boundary() const noexcept { return boundary_; }
  const Mesh1D& mesh() const noexcept { return mesh_; }

  /// F = (M + δ²S)⁻¹ M
  const DenseMatrix& filter_matrix() const noexcept { return filter_; }
  /// Π = I − D_N(F) F
  const DenseMatrix& fluctuation_matrix() const noexcept { return fluctuation_; }
  /// Πᵀ S Π (without the χ δ² prefactor)
  const DenseMatrix& fluctuation_stiffness() const noexcept { return fluct_stiffness_; }

  /// Solves (M + δ²S) ū = M u.
  FeFunction apply_filter(const FeFunction& u) const;
  /// D_N applied iteratively through repeated filter solves.
  FeFunction deconvolve(const FeFunction& ubar) const;
  /// u − D_N ū, evaluated through the operator path (filter solves).
  FeFunction fluctuation(const FeFunction& u) const;

  /// χ δ² Πᵀ S Π. Throws NegativeChi for χ < 0.
  DenseMatrix stabilization_matrix(double chi) const;

 private:
  void require_mesh(const FeFunction& u, const char* where) const;

  Mesh1D mesh_;
  double delta_;
  int deconv_order_;
  FilterBoundary boundary_;
  DenseMatrix rhs_;  ///< right-hand-side operator of the filter system (M, boundary rows adjusted)
  std::shared_ptr<const LuFactorization> filter_system_;
  DenseMatrix filter_;
  DenseMatrix fluctuation_;
  DenseMatrix fluct_stiffness_;
};

}  // namespace lwr
