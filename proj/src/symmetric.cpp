#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "glgeo/algebra.hpp"
#include "glgeo/matrix_functions.hpp"

namespace glgeo {

namespace {

constexpr double kJacobiTolerance = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const SquareMat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// V diag(f(lambda)) V^T, symmetrized.
template <typename Fn>
SquareMat spectral_apply(const SymmetricEigen& eig, Fn&& fn) {
  const std::size_t n = eig.vectors.dim();
  SquareMat out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = fn(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * eig.vectors(j, k);
    }
  }
  return sym_part(out);
}

SymmetricEigen checked_psym_eigen(const SquareMat& p, const char* op) {
  const double scale = p.frobenius_norm();
  if (skew_part(p).frobenius_norm() > 1e-10 * scale) {
    throw Error(ErrorKind::domain, std::string(op) + ": matrix is not symmetric");
  }
  SymmetricEigen eig = symmetric_eigen(p);
  if (!(eig.values.front() > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << op << ": matrix is not positive definite (eigenvalue " << eig.values.front() << ")";
    throw Error(ErrorKind::domain, msg.str());
  }
  return eig;
}

}  // namespace

SymmetricEigen symmetric_eigen(const SquareMat& s) {
  const std::size_t n = s.dim();
  SquareMat a = sym_part(s);
  SquareMat v = SquareMat::identity(n);
  const double scale = a.frobenius_norm();

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiTolerance * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double sn = t * c;
        // A <- J^T A J with the rotation acting on rows/columns p and q.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{std::vector<double>(n), SquareMat(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

SquareMat log_psym(const SquareMat& p) {
  const SymmetricEigen eig = checked_psym_eigen(p, "log_psym");
  return spectral_apply(eig, [](double x) { return std::log(x); });
}

SquareMat sqrt_psym(const SquareMat& p) {
  const SymmetricEigen eig = checked_psym_eigen(p, "sqrt_psym");
  return spectral_apply(eig, [](double x) { return std::sqrt(x); });
}

PolarDecomposition polar_decompose(const SquareMat& f) {
  const double det = determinant(f);
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "polar_decompose: det F = " << det << " is not positive";
    throw Error(ErrorKind::domain, msg.str());
  }
  const SymmetricEigen eig = checked_psym_eigen(sym_part(f.transposed() * f), "polar_decompose");
  SquareMat stretch = spectral_apply(eig, [](double x) { return std::sqrt(x); });
  const SquareMat stretch_inv = spectral_apply(eig, [](double x) { return 1.0 / std::sqrt(x); });
  SquareMat rotation = f * stretch_inv;
  const std::size_t n = f.dim();
  // One Newton-Schulz step pulls R back onto O(n).
  rotation = 0.5 * (rotation * (3.0 * SquareMat::identity(n) - rotation.transposed() * rotation));
  return {std::move(rotation), std::move(stretch)};
}

bool is_normal(const SquareMat& m, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "is_normal: tolerance must be positive");
  }
  const SquareMat mt = m.transposed();
  const double defect = (m * mt - mt * m).frobenius_norm();
  const double norm = m.frobenius_norm();
  return defect <= tol * norm * norm;
}

}  // namespace glgeo
