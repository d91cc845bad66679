#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "lwr/linalg.hpp"

namespace lwr {

enum class BoundaryKind { Periodic, Dirichlet };

std::string_view to_string(BoundaryKind kind);

/// Gauss–Legendre rule mapped to the reference element [0, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return points.size(); }
};

/// n-point Gauss–Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n_points);

/// Rule used for every matrix/vector assembly (exact to degree 7).
const QuadratureRule& assembly_quadrature();
/// Rule used for error norms (exact to degree 9).
const QuadratureRule& error_quadrature();

/// Lagrange shape functions on [0, 1]. Local nodes are ordered left vertex,
/// (midpoint,) right vertex.
struct ShapeValues {
  std::array<double, 3> value{};
  std::array<double, 3> derivative{};  // d/dξ on the reference element
};

ShapeValues lagrange_shape(int degree, double xi);

/// Uniform 1D mesh of Lagrange P1 or P2 elements.
///
/// Global DOFs are numbered left to right, so DOF i sits at
/// x_left + i·h/degree. On periodic meshes the right end vertex is the same
/// DOF as the left one and is not counted twice.
class Mesh1D {
 public:
  Mesh1D(double x_left, double x_right, int n_elements, int degree, BoundaryKind boundary);

  double x_left() const noexcept { return x_left_; }
  double x_right() const noexcept { return x_right_; }
  int n_elements() const noexcept { return n_elements_; }
  int degree() const noexcept { return degree_; }
  BoundaryKind boundary() const noexcept { return boundary_; }
  bool periodic() const noexcept { return boundary_ == BoundaryKind::Periodic; }

  double h() const noexcept { return (x_right_ - x_left_) / n_elements_; }
  double length() const noexcept { return x_right_ - x_left_; }
  int dofs_per_element() const noexcept { return degree_ + 1; }
  std::size_t n_dofs() const noexcept;

  /// Global index of local node `local` on element `element`.
  std::size_t dof(int element, int local) const noexcept;
  /// Physical coordinate of a global DOF.
  double dof_coordinate(std::size_t i) const noexcept;
  std::vector<double> dof_coordinates() const;

  double element_left(int element) const noexcept { return x_left_ + element * h(); }
  /// Element containing x and the reference coordinate of x within it.
  /// Throws OutOfDomain outside [x_left, x_right].
  std::pair<int, double> locate(double x) const;

  std::size_t left_boundary_dof() const noexcept { return 0; }
  std::size_t right_boundary_dof() const noexcept { return n_dofs() - 1; }

  friend bool operator==(const Mesh1D&, const Mesh1D&) = default;

 private:
  double x_left_;
  double x_right_;
  int n_elements_;
  int degree_;
  BoundaryKind boundary_;
};

Mesh1D build_mesh(double x_left, double x_right, int n_elements, int degree, BoundaryKind boundary);

/// Coefficient vector over the DOFs of a mesh.
class FeFunction {
 public:
  explicit FeFunction(Mesh1D mesh);
  FeFunction(Mesh1D mesh, Vector coefficients);

  const Mesh1D& mesh() const noexcept { return mesh_; }
  const Vector& coefficients() const noexcept { return coefficients_; }
  Vector& coefficients() noexcept { return coefficients_; }
  std::size_t size() const noexcept { return coefficients_.size(); }

  double operator[](std::size_t i) const { return coefficients_[i]; }
  double& operator[](std::size_t i) { return coefficients_[i]; }

  double value(double x) const;
  double derivative(double x) const;

  /// Value and x-derivative at reference coordinate xi of an element.
  std::pair<double, double> element_eval(int element, double xi) const;

  FeFunction& operator+=(const FeFunction& other);
  FeFunction& operator-=(const FeFunction& other);
  FeFunction& operator*=(double s);

 private:
  Mesh1D mesh_;
  Vector coefficients_;
};

FeFunction operator+(FeFunction a, const FeFunction& b);
FeFunction operator-(FeFunction a, const FeFunction& b);
FeFunction operator*(double s, FeFunction a);

/// Throws MeshMismatch unless both functions live on the same mesh.
void require_same_mesh(const FeFunction& a, const FeFunction& b, const char* where);

using SpaceFunction = std::function<double(double)>;
using SpaceTimeFunction = std::function<double(double, double)>;

double evaluate(const FeFunction& f, double x);

/// Nodal interpolant.
FeFunction interpolate(const SpaceFunction& g, const Mesh1D& mesh);

/// Consistent mass matrix M_ij = (φ_j, φ_i).
DenseMatrix mass_matrix(const Mesh1D& mesh);

/// Load vector (g, φ_i) by assembly quadrature.
Vector load_vector(const SpaceFunction& g, const Mesh1D& mesh);

/// L² projection onto the finite element space: one mass-matrix solve.
FeFunction l2_project(const SpaceFunction& g, const Mesh1D& mesh);

}  // namespace lwr
