#include "lwr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lwr/errors.hpp"

namespace lwr {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": sizes " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_size(size(), other.size(), "Vector::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Vector& Vector::axpy(double s, const Vector& x) {
  require_same_size(size(), x.size(), "Vector::axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * x.data_[i];
  return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }
Vector operator*(Vector a, double s) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Vector& a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("DenseMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, const Vector& v) {
  require_same_size(rows_, v.size(), "DenseMatrix::set_column");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) { return add_scaled(1.0, other); }
DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) { return add_scaled(-1.0, other); }

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseMatrix& DenseMatrix::add_scaled(double s, const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw DimensionMismatch("DenseMatrix::add_scaled: shape mismatch");
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
  return *this;
}

double DenseMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : data_) sum += v * v;
  return std::sqrt(sum);
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("mat_mul: inner dimensions " + std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()) + " disagree");
  }
  DenseMatrix c(a.rows(), b.cols());
  // i-k-j order keeps the innermost loop on contiguous rows of b and c.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto c_row = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) c_row[j] += aik * b_row[j];
    }
  }
  return c;
}

Vector mat_vec(const DenseMatrix& a, const Vector& x) {
  require_same_size(a.cols(), x.size(), "mat_vec");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += r[j] * x[j];
    y[i] = sum;
  }
  return y;
}

Vector mat_t_vec(const DenseMatrix& a, const Vector& x) {
  require_same_size(a.rows(), x.size(), "mat_t_vec");
  Vector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += r[j] * xi;
  }
  return y;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.is_square()) throw DimensionMismatch("LuFactorization: matrix is not square");
  const std::size_t n = lu_.rows();

  std::vector<double> column_scale(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      column_scale[j] = std::max(column_scale[j], std::abs(lu_(i, j)));

  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot_row = k;
    double pivot_mag = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(lu_(i, k));
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = i;
      }
    }
    if (!(pivot_mag > kPivotTolerance * column_scale[k]) || pivot_mag == 0.0) {
      throw SingularMatrix("LuFactorization: pivot " + std::to_string(pivot_mag) +
                           " in column " + std::to_string(k) + " below tolerance");
    }
    if (pivot_row != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(pivot_row).begin());
      std::swap(perm_[k], perm_[pivot_row]);
    }
    const double inv_pivot = 1.0 / lu_(k, k);
    auto pivot = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto r = lu_.row(i);
      const double l = r[k] * inv_pivot;
      r[k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) r[j] -= l * pivot[j];
    }
  }
}

void LuFactorization::solve_in_place(std::span<double> x) const {
  const std::size_t n = lu_.rows();
  for (std::size_t i = 1; i < n; ++i) {
    auto r = lu_.row(i);
    double sum = x[i];
    for (std::size_t j = 0; j < i; ++j) sum -= r[j] * x[j];
    x[i] = sum;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    auto r = lu_.row(ii);
    double sum = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sum -= r[j] * x[j];
    x[ii] = sum / r[ii];
  }
}

Vector LuFactorization::solve(const Vector& b) const {
  require_same_size(size(), b.size(), "LuFactorization::solve");
  Vector x(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) x[i] = b[perm_[i]];
  solve_in_place(x.span());
  return x;
}

DenseMatrix LuFactorization::solve(const DenseMatrix& b) const {
  require_same_size(size(), b.rows(), "LuFactorization::solve");
  DenseMatrix x(b.rows(), b.cols());
  Vector work(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) work[i] = b(perm_[i], j);
    solve_in_place(work.span());
    x.set_column(j, work);
  }
  return x;
}

Vector lu_solve(const DenseMatrix& a, const Vector& b) {
  if (!a.is_square()) throw DimensionMismatch("lu_solve: matrix is not square");
  require_same_size(a.rows(), b.size(), "lu_solve");
  return LuFactorization(a).solve(b);
}

}  // namespace lwr
