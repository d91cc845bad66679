#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lwr {

/// Dense real vector. Thin wrapper over contiguous storage with the few
/// arithmetic operations the solvers need.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  /// this += s * x
  Vector& axpy(double s, const Vector& x);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
Vector operator*(Vector a, double s);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
double norm_inf(const Vector& a);
bool all_finite(const Vector& a);

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  /// Row-wise nested initializer, e.g. {{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> entries() const noexcept { return data_; }

  DenseMatrix transpose() const;
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);
  /// this += s * other
  DenseMatrix& add_scaled(double s, const DenseMatrix& other);

  double frobenius_norm() const;
  bool all_finite() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// Standard matrix product. Throws DimensionMismatch on incompatible shapes.
DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);
Vector mat_vec(const DenseMatrix& a, const Vector& x);
/// Aᵀ x without forming the transpose.
Vector mat_t_vec(const DenseMatrix& a, const Vector& x);

/// LU factorization with partial (row) pivoting, PA = LU.
///
/// A pivot whose magnitude falls below 1e-14 times the largest absolute
/// entry of the corresponding column of the input matrix is treated as a
/// zero pivot and raises SingularMatrix.
class LuFactorization {
 public:
  static constexpr double kPivotTolerance = 1e-14;

  explicit LuFactorization(DenseMatrix a);

  std::size_t size() const noexcept { return lu_.rows(); }

  Vector solve(const Vector& b) const;
  /// Solves for every column of b.
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  void solve_in_place(std::span<double> x) const;

  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

/// Convenience wrapper: factor and solve once.
Vector lu_solve(const DenseMatrix& a, const Vector& b);

}  // namespace lwr
