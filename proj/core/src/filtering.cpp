#include "lwr/filtering.hpp"

#include <algorithm>
#include <string>

#include "lwr/errors.hpp"

namespace lwr {

FilterContext::FilterContext(const AssembledOperators& ops, double delta, int deconv_order,
                             FilterBoundary boundary)
    : mesh_(ops.mesh),
      delta_(delta),
      deconv_order_(deconv_order),
      boundary_(mesh_.periodic() ? FilterBoundary::Natural : boundary),
      rhs_(ops.mass) {
  if (delta < 0.0) throw InvalidParameter("FilterContext: delta must be >= 0");
  if (deconv_order < 0) throw InvalidParameter("FilterContext: deconvolution order must be >= 0");

  const std::size_t n = mesh_.n_dofs();
  DenseMatrix system = ops.mass;
  system.add_scaled(delta * delta, ops.stiffness);
  if (boundary_ != FilterBoundary::Natural) {
    for (std::size_t i : {mesh_.left_boundary_dof(), mesh_.right_boundary_dof()}) {
      auto srow = system.row(i);
      auto rrow = rhs_.row(i);
      std::fill(srow.begin(), srow.end(), 0.0);
      std::fill(rrow.begin(), rrow.end(), 0.0);
      srow[i] = 1.0;
      if (boundary_ == FilterBoundary::Clamped) rrow[i] = 1.0;
    }
  }
  filter_system_ = std::make_shared<const LuFactorization>(std::move(system));
  filter_ = filter_system_->solve(rhs_);

  // D_N(F) = Σ_{k=0}^{N} (I − F)^k by Horner: D ← I; repeat N times D ← I + (I − F) D.
  const DenseMatrix eye = DenseMatrix::identity(n);
  const DenseMatrix complement = eye - filter_;
  DenseMatrix deconv = eye;
  for (int k = 0; k < deconv_order; ++k) deconv = eye + mat_mul(complement, deconv);

  fluctuation_ = eye - mat_mul(deconv, filter_);
  fluct_stiffness_ = mat_mul(fluctuation_.transpose(), mat_mul(ops.stiffness, fluctuation_));
  // Symmetrize away round-off so the stabilization matrix is exactly symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (fluct_stiffness_(i, j) + fluct_stiffness_(j, i));
      fluct_stiffness_(i, j) = avg;
      fluct_stiffness_(j, i) = avg;
    }
  }
}

void FilterContext::require_mesh(const FeFunction& u, const char* where) const {
  if (!(u.mesh() == mesh_)) throw MeshMismatch(std::string(where) + ": function not on the filter mesh");
}

FeFunction FilterContext::apply_filter(const FeFunction& u) const {
  require_mesh(u, "FilterContext::apply_filter");
  return FeFunction(mesh_, filter_system_->solve(mat_vec(rhs_, u.coefficients())));
}

FeFunction FilterContext::deconvolve(const FeFunction& ubar) const {
  require_mesh(ubar, "FilterContext::deconvolve");
  FeFunction acc = ubar;
  FeFunction term = ubar;
  for (int k = 0; k < deconv_order_; ++k) {
    term -= apply_filter(term);
    acc += term;
  }
  return acc;
}

FeFunction FilterContext::fluctuation(const FeFunction& u) const {
  return u - deconvolve(apply_filter(u));
}

DenseMatrix FilterContext::stabilization_matrix(double chi) const {
  if (chi < 0.0) throw NegativeChi("stabilization_matrix: chi = " + std::to_string(chi) + " < 0");
  return (chi * delta_ * delta_) * fluct_stiffness_;
}

}  // namespace lwr
