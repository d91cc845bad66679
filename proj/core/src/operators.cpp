#include "lwr/operators.hpp"

#include <cmath>

#include "lwr/errors.hpp"

namespace lwr {

namespace {

/// Shape values and physical derivatives at every assembly point.
struct ReferenceTable {
  std::vector<ShapeValues> shapes;
  std::vector<double> weights;
};

ReferenceTable reference_table(const Mesh1D& mesh) {
  const QuadratureRule& q = assembly_quadrature();
  ReferenceTable t;
  for (std::size_t k = 0; k < q.size(); ++k) {
    ShapeValues s = lagrange_shape(mesh.degree(), q.points[k]);
    for (double& d : s.derivative) d /= mesh.h();
    t.shapes.push_back(s);
    t.weights.push_back(q.weights[k] * mesh.h());
  }
  return t;
}

}  // namespace

AssembledOperators assemble(const Mesh1D& mesh) {
  const std::size_t n = mesh.n_dofs();
  const int nloc = mesh.dofs_per_element();
  const ReferenceTable table = reference_table(mesh);
  AssembledOperators ops{mesh, DenseMatrix(n, n), DenseMatrix(n, n), DenseMatrix(n, n)};
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (std::size_t k = 0; k < table.shapes.size(); ++k) {
      const ShapeValues& s = table.shapes[k];
      const double w = table.weights[k];
      for (int a = 0; a < nloc; ++a) {
        const std::size_t i = mesh.dof(e, a);
        for (int b = 0; b < nloc; ++b) {
          const std::size_t j = mesh.dof(e, b);
          ops.mass(i, j) += w * s.value[b] * s.value[a];
          ops.stiffness(i, j) += w * s.derivative[b] * s.derivative[a];
          ops.convection(i, j) += w * s.derivative[b] * s.value[a];
        }
      }
    }
  }
  return ops;
}

Vector forcing_vector(const SpaceTimeFunction& f, double t, const Mesh1D& mesh) {
  if (!f) return Vector(mesh.n_dofs());
  return load_vector([&](double x) { return f(x, t); }, mesh);
}

double b_form(const FeFunction& u, const FeFunction& v, const FeFunction& w) {
  require_same_mesh(u, v, "b_form");
  require_same_mesh(u, w, "b_form");
  const Mesh1D& mesh = u.mesh();
  const QuadratureRule& q = assembly_quadrature();
  double sum = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (std::size_t k = 0; k < q.size(); ++k) {
      const auto [uq, duq] = u.element_eval(e, q.points[k]);
      const auto [vq, dvq] = v.element_eval(e, q.points[k]);
      const double wq = w.element_eval(e, q.points[k]).first;
      sum += q.weights[k] * mesh.h() * (duq * vq + 2.0 * uq * dvq) * wq;
    }
  }
  return sum / 3.0;
}

Vector b_residual(const FeFunction& rho) {
  const Mesh1D& mesh = rho.mesh();
  const ReferenceTable table = reference_table(mesh);
  const int nloc = mesh.dofs_per_element();
  Vector r(mesh.n_dofs());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (std::size_t k = 0; k < table.shapes.size(); ++k) {
      const ShapeValues& s = table.shapes[k];
      double u = 0.0;
      double du = 0.0;
      for (int a = 0; a < nloc; ++a) {
        const double c = rho[mesh.dof(e, a)];
        u += c * s.value[a];
        du += c * s.derivative[a];
      }
      // (1/3)(u'u + 2uu') = u u'
      const double integrand = table.weights[k] * (du * u + 2.0 * u * du) / 3.0;
      for (int a = 0; a < nloc; ++a) r[mesh.dof(e, a)] += integrand * s.value[a];
    }
  }
  return r;
}

void add_b_jacobian(const FeFunction& rho, double scale, DenseMatrix& out) {
  const Mesh1D& mesh = rho.mesh();
  if (out.rows() != mesh.n_dofs() || out.cols() != mesh.n_dofs()) {
    throw DimensionMismatch("add_b_jacobian: output matrix has the wrong shape");
  }
  const ReferenceTable table = reference_table(mesh);
  const int nloc = mesh.dofs_per_element();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (std::size_t k = 0; k < table.shapes.size(); ++k) {
      const ShapeValues& s = table.shapes[k];
      double u = 0.0;
      double du = 0.0;
      for (int a = 0; a < nloc; ++a) {
        const double c = rho[mesh.dof(e, a)];
        u += c * s.value[a];
        du += c * s.derivative[a];
      }
      const double w = scale * table.weights[k] / 3.0;
      for (int a = 0; a < nloc; ++a) {
        const std::size_t i = mesh.dof(e, a);
        for (int b = 0; b < nloc; ++b) {
          // b(φ_b, ρ, φ_a) + b(ρ, φ_b, φ_a)
          const double first = s.derivative[b] * u + 2.0 * s.value[b] * du;
          const double second = du * s.value[b] + 2.0 * u * s.derivative[b];
          out(i, mesh.dof(e, b)) += w * (first + second) * s.value[a];
        }
      }
    }
  }
}

DenseMatrix b_jacobian(const FeFunction& rho) {
  DenseMatrix j(rho.size(), rho.size());
  add_b_jacobian(rho, 1.0, j);
  return j;
}

double mass_norm(const DenseMatrix& mass, const Vector& u) {
  const double q = dot(u, mat_vec(mass, u));
  return std::sqrt(q > 0.0 ? q : 0.0);
}

double mass_norm(const DenseMatrix& mass, const FeFunction& u) {
  return mass_norm(mass, u.coefficients());
}

}  // namespace lwr
