#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace glgeo {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  singular,
  domain,
  parse,
  not_converged,
};

/// Every failure in the library is reported through this exception; the kind
/// lets front ends map failures to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Dense n x n real matrix stored row-major. Used both for group elements of
/// GL(n) and for tangent vectors in gl(n).
class SquareMat {
 public:
  /// Zero matrix of dimension n (n >= 1).
  explicit SquareMat(std::size_t n);
  SquareMat(std::size_t n, std::vector<double> row_major);
  SquareMat(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMat zeros(std::size_t n) { return SquareMat(n); }
  static SquareMat identity(std::size_t n);
  static SquareMat diagonal(std::span<const double> diag);
  static SquareMat diagonal(std::initializer_list<double> diag);
  /// Validating constructor from nested rows: rejects ragged and non-finite input.
  static SquareMat from_rows(const std::vector<std::vector<double>>& rows);

  [[nodiscard]] std::size_t dim() const noexcept { return n_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

  [[nodiscard]] std::span<double> data() noexcept { return data_; }
  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

  [[nodiscard]] SquareMat transposed() const;
  [[nodiscard]] double trace() const noexcept;
  [[nodiscard]] double frobenius_norm() const noexcept;
  /// Maximum absolute column sum.
  [[nodiscard]] double norm1() const noexcept;
  [[nodiscard]] double max_abs() const noexcept;
  [[nodiscard]] bool all_finite() const noexcept;

  SquareMat& operator+=(const SquareMat& other);
  SquareMat& operator-=(const SquareMat& other);
  SquareMat& operator*=(double s) noexcept;
  SquareMat& operator/=(double s) noexcept;

  friend bool operator==(const SquareMat&, const SquareMat&) = default;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

SquareMat operator+(SquareMat a, const SquareMat& b);
SquareMat operator-(SquareMat a, const SquareMat& b);
SquareMat operator-(SquareMat a);
SquareMat operator*(SquareMat a, double s);
SquareMat operator*(double s, SquareMat a);
SquareMat operator/(SquareMat a, double s);
SquareMat operator*(const SquareMat& a, const SquareMat& b);

void require_same_dim(const SquareMat& a, const SquareMat& b, const char* where);

/// Frobenius distance between two matrices of equal dimension.
double frobenius_distance(const SquareMat& a, const SquareMat& b);

/// LU factorization with partial pivoting, PA = LU, packed in one matrix.
class LuDecomposition {
 public:
  explicit LuDecomposition(const SquareMat& a);

  [[nodiscard]] double determinant() const noexcept;
  /// True when some pivot is exactly zero.
  [[nodiscard]] bool is_singular() const noexcept { return singular_; }
  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;
  [[nodiscard]] SquareMat solve(const SquareMat& rhs) const;
  [[nodiscard]] SquareMat inverse() const;

 private:
  SquareMat lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

double determinant(const SquareMat& a);

/// Reciprocal 1-norm condition number 1 / (|A|_1 |A^-1|_1); zero for singular A.
double reciprocal_condition(const SquareMat& a);

/// Inverse of A. Throws ErrorKind::singular when the reciprocal condition
/// number is below `rcond_min`.
SquareMat inverse(const SquareMat& a, double rcond_min = 1e-12);

/// Solves A X = B for square B. Same guard as inverse().
SquareMat solve(const SquareMat& a, const SquareMat& b, double rcond_min = 1e-12);

}  // namespace glgeo
