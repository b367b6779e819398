#include "glgeo/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace glgeo {

namespace {

void check_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, "matrix entries must be finite");
    }
  }
}

}  // namespace

SquareMat::SquareMat(std::size_t n) : n_(n), data_(n * n, 0.0) {
  if (n == 0) {
    throw Error(ErrorKind::invalid_argument, "matrix dimension must be at least 1");
  }
}

SquareMat::SquareMat(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (n == 0) {
    throw Error(ErrorKind::invalid_argument, "matrix dimension must be at least 1");
  }
  if (data_.size() != n * n) {
    std::ostringstream msg;
    msg << "expected " << n * n << " entries for a " << n << "x" << n << " matrix, got "
        << data_.size();
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
  check_finite(data_);
}

SquareMat::SquareMat(std::initializer_list<std::initializer_list<double>> rows)
    : SquareMat(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw Error(ErrorKind::invalid_argument, "ragged matrix literal");
    }
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * n_));
    ++i;
  }
  check_finite(data_);
}

SquareMat SquareMat::identity(std::size_t n) {
  SquareMat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMat SquareMat::diagonal(std::span<const double> diag) {
  SquareMat m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  check_finite(m.data());
  return m;
}

SquareMat SquareMat::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SquareMat SquareMat::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) {
    throw Error(ErrorKind::invalid_argument, "empty matrix literal");
  }
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw Error(ErrorKind::invalid_argument, "ragged or non-square matrix literal");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return SquareMat(n, std::move(flat));
}

SquareMat SquareMat::transposed() const {
  SquareMat t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double SquareMat::trace() const noexcept {
  double tr = 0.0;
  for (std::size_t i = 0; i < n_; ++i) tr += (*this)(i, i);
  return tr;
}

double SquareMat::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double SquareMat::norm1() const noexcept {
  double best = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n_; ++i) col += std::abs((*this)(i, j));
    best = std::max(best, col);
  }
  return best;
}

double SquareMat::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

bool SquareMat::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SquareMat& SquareMat::operator+=(const SquareMat& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SquareMat& SquareMat::operator-=(const SquareMat& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SquareMat& SquareMat::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

SquareMat& SquareMat::operator/=(double s) noexcept {
  for (double& v : data_) v /= s;
  return *this;
}

SquareMat operator+(SquareMat a, const SquareMat& b) { return a += b; }
SquareMat operator-(SquareMat a, const SquareMat& b) { return a -= b; }
SquareMat operator-(SquareMat a) { return a *= -1.0; }
SquareMat operator*(SquareMat a, double s) { return a *= s; }
SquareMat operator*(double s, SquareMat a) { return a *= s; }
SquareMat operator/(SquareMat a, double s) { return a /= s; }

SquareMat operator*(const SquareMat& a, const SquareMat& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  SquareMat c(n);
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

void require_same_dim(const SquareMat& a, const SquareMat& b, const char* where) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw Error(ErrorKind::dimension_mismatch, msg.str());
  }
}

double frobenius_distance(const SquareMat& a, const SquareMat& b) {
  return (a - b).frobenius_norm();
}

LuDecomposition::LuDecomposition(const SquareMat& a) : lu_(a), perm_(a.dim()) {
  const std::size_t n = a.dim();
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot, j));
      std::swap(perm_[k], perm_[pivot]);
      sign_ = -sign_;
    }
    const double inv_pivot = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = lu_(i, k) * inv_pivot;
      lu_(i, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
    }
  }
}

double LuDecomposition::determinant() const noexcept {
  if (singular_) return 0.0;
  double det = sign_;
  for (std::size_t i = 0; i < lu_.dim(); ++i) det *= lu_(i, i);
  return det;
}

std::vector<double> LuDecomposition::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.dim();
  if (rhs.size() != n) {
    throw Error(ErrorKind::dimension_mismatch, "LU solve: right-hand side has wrong length");
  }
  if (singular_) {
    throw Error(ErrorKind::singular, "LU solve: matrix is singular");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

SquareMat LuDecomposition::solve(const SquareMat& rhs) const {
  require_same_dim(lu_, rhs, "LU solve");
  const std::size_t n = lu_.dim();
  SquareMat x(n);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rhs(i, j);
    const auto sol = solve(column);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
  }
  return x;
}

SquareMat LuDecomposition::inverse() const { return solve(SquareMat::identity(lu_.dim())); }

double determinant(const SquareMat& a) {
  const std::size_t n = a.dim();
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return LuDecomposition(a).determinant();
}

double reciprocal_condition(const SquareMat& a) {
  const LuDecomposition lu(a);
  if (lu.is_singular()) return 0.0;
  const double norm_a = a.norm1();
  const SquareMat inv = lu.inverse();
  const double norm_inv = inv.norm1();
  if (!std::isfinite(norm_inv) || norm_a == 0.0) return 0.0;
  return 1.0 / (norm_a * norm_inv);
}

SquareMat inverse(const SquareMat& a, double rcond_min) {
  const LuDecomposition lu(a);
  if (lu.is_singular()) {
    throw Error(ErrorKind::singular, "matrix is singular");
  }
  SquareMat inv = lu.inverse();
  const double rcond = 1.0 / (a.norm1() * inv.norm1());
  if (!(rcond >= rcond_min)) {
    std::ostringstream msg;
    msg << "matrix is numerically singular (reciprocal condition " << rcond << ")";
    throw Error(ErrorKind::singular, msg.str());
  }
  return inv;
}

SquareMat solve(const SquareMat& a, const SquareMat& b, double rcond_min) {
  return inverse(a, rcond_min) * b;
}

}  // namespace glgeo
