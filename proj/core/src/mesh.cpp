#include "lwr/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "lwr/errors.hpp"

namespace lwr {

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::Periodic ? "periodic" : "dirichlet";
}

QuadratureRule gauss_legendre(int n_points) {
  if (n_points < 1) throw InvalidParameter("gauss_legendre: need at least one point");
  QuadratureRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);
  const int n = n_points;
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like estimate of the i-th root.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    auto legendre = [n](double x) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      // P_n(x) and P_n'(x)
      return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, dpn] = legendre(z);
      const double dz = pn / dpn;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre(z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] -> [0, 1]; roots come out in descending order.
    rule.points[n - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

const QuadratureRule& assembly_quadrature() {
  static const QuadratureRule rule = gauss_legendre(4);
  return rule;
}

const QuadratureRule& error_quadrature() {
  static const QuadratureRule rule = gauss_legendre(5);
  return rule;
}

ShapeValues lagrange_shape(int degree, double xi) {
  ShapeValues s;
  if (degree == 1) {
    s.value = {1.0 - xi, xi, 0.0};
    s.derivative = {-1.0, 1.0, 0.0};
  } else if (degree == 2) {
    s.value = {(1.0 - xi) * (1.0 - 2.0 * xi), 4.0 * xi * (1.0 - xi), xi * (2.0 * xi - 1.0)};
    s.derivative = {4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0};
  } else {
    throw InvalidDegree("lagrange_shape: degree " + std::to_string(degree) + " not in {1, 2}");
  }
  return s;
}

Mesh1D::Mesh1D(double x_left, double x_right, int n_elements, int degree, BoundaryKind boundary)
    : x_left_(x_left),
      x_right_(x_right),
      n_elements_(n_elements),
      degree_(degree),
      boundary_(boundary) {
  if (degree != 1 && degree != 2) {
    throw InvalidDegree("Mesh1D: degree " + std::to_string(degree) + " not in {1, 2}");
  }
  if (n_elements < 2) {
    throw TooFewElements("Mesh1D: need at least 2 elements, got " + std::to_string(n_elements));
  }
  if (!(x_left < x_right)) throw InvalidParameter("Mesh1D: x_left must be < x_right");
}

std::size_t Mesh1D::n_dofs() const noexcept {
  const auto interior = static_cast<std::size_t>(degree_) * n_elements_;
  return periodic() ? interior : interior + 1;
}

std::size_t Mesh1D::dof(int element, int local) const noexcept {
  const std::size_t raw = static_cast<std::size_t>(degree_) * element + local;
  return periodic() ? raw % n_dofs() : raw;
}

double Mesh1D::dof_coordinate(std::size_t i) const noexcept {
  return x_left_ + static_cast<double>(i) * h() / degree_;
}

std::vector<double> Mesh1D::dof_coordinates() const {
  std::vector<double> xs(n_dofs());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = dof_coordinate(i);
  return xs;
}

std::pair<int, double> Mesh1D::locate(double x) const {
  const double slack = 1e-12 * length();
  if (!(x >= x_left_ - slack && x <= x_right_ + slack)) {
    throw OutOfDomain("Mesh1D::locate: x = " + std::to_string(x) + " outside [" +
                      std::to_string(x_left_) + ", " + std::to_string(x_right_) + "]");
  }
  const double s = (x - x_left_) / h();
  int e = static_cast<int>(std::floor(s));
  if (e < 0) e = 0;
  if (e >= n_elements_) e = n_elements_ - 1;
  return {e, s - e};
}

Mesh1D build_mesh(double x_left, double x_right, int n_elements, int degree,
                  BoundaryKind boundary) {
  return Mesh1D(x_left, x_right, n_elements, degree, boundary);
}

FeFunction::FeFunction(Mesh1D mesh) : mesh_(mesh), coefficients_(mesh.n_dofs()) {}

FeFunction::FeFunction(Mesh1D mesh, Vector coefficients)
    : mesh_(mesh), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != mesh_.n_dofs()) {
    throw DimensionMismatch("FeFunction: " + std::to_string(coefficients_.size()) +
                            " coefficients for a mesh with " + std::to_string(mesh_.n_dofs()) +
                            " DOFs");
  }
}

std::pair<double, double> FeFunction::element_eval(int element, double xi) const {
  const ShapeValues s = lagrange_shape(mesh_.degree(), xi);
  double v = 0.0;
  double dv = 0.0;
  for (int a = 0; a < mesh_.dofs_per_element(); ++a) {
    const double c = coefficients_[mesh_.dof(element, a)];
    v += c * s.value[a];
    dv += c * s.derivative[a];
  }
  return {v, dv / mesh_.h()};
}

double FeFunction::value(double x) const {
  const auto [e, xi] = mesh_.locate(x);
  return element_eval(e, xi).first;
}

double FeFunction::derivative(double x) const {
  const auto [e, xi] = mesh_.locate(x);
  return element_eval(e, xi).second;
}

void require_same_mesh(const FeFunction& a, const FeFunction& b, const char* where) {
  if (!(a.mesh() == b.mesh())) throw MeshMismatch(std::string(where) + ": functions on different meshes");
}

FeFunction& FeFunction::operator+=(const FeFunction& other) {
  require_same_mesh(*this, other, "FeFunction::operator+=");
  coefficients_ += other.coefficients_;
  return *this;
}

FeFunction& FeFunction::operator-=(const FeFunction& other) {
  require_same_mesh(*this, other, "FeFunction::operator-=");
  coefficients_ -= other.coefficients_;
  return *this;
}

FeFunction& FeFunction::operator*=(double s) {
  coefficients_ *= s;
  return *this;
}

FeFunction operator+(FeFunction a, const FeFunction& b) { return a += b; }
FeFunction operator-(FeFunction a, const FeFunction& b) { return a -= b; }
FeFunction operator*(double s, FeFunction a) { return a *= s; }

double evaluate(const FeFunction& f, double x) { return f.value(x); }

FeFunction interpolate(const SpaceFunction& g, const Mesh1D& mesh) {
  Vector c(mesh.n_dofs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = g(mesh.dof_coordinate(i));
  return FeFunction(mesh, std::move(c));
}

DenseMatrix mass_matrix(const Mesh1D& mesh) {
  const std::size_t n = mesh.n_dofs();
  const int nloc = mesh.dofs_per_element();
  const QuadratureRule& q = assembly_quadrature();
  const double h = mesh.h();
  DenseMatrix m(n, n);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (std::size_t k = 0; k < q.size(); ++k) {
      const ShapeValues s = lagrange_shape(mesh.degree(), q.points[k]);
      const double w = q.weights[k] * h;
      for (int a = 0; a < nloc; ++a)
        for (int b = 0; b < nloc; ++b) m(mesh.dof(e, a), mesh.dof(e, b)) += w * s.value[a] * s.value[b];
    }
  }
  return m;
}

Vector load_vector(const SpaceFunction& g, const Mesh1D& mesh) {
  const QuadratureRule& q = assembly_quadrature();
  const double h = mesh.h();
  Vector f(mesh.n_dofs());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double x0 = mesh.element_left(e);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const ShapeValues s = lagrange_shape(mesh.degree(), q.points[k]);
      const double gw = g(x0 + q.points[k] * h) * q.weights[k] * h;
      for (int a = 0; a < mesh.dofs_per_element(); ++a) f[mesh.dof(e, a)] += gw * s.value[a];
    }
  }
  return f;
}

FeFunction l2_project(const SpaceFunction& g, const Mesh1D& mesh) {
  return FeFunction(mesh, lu_solve(mass_matrix(mesh), load_vector(g, mesh)));
}

}  // namespace lwr
