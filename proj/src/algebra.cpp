#include "glgeo/algebra.hpp"

#include <cmath>
#include <sstream>

namespace glgeo {

MetricParams::MetricParams(double mu, double mu_c, double kappa)
    : mu_(mu), mu_c_(mu_c), kappa_(kappa) {
  if (!(mu > 0.0) || !(mu_c > 0.0) || !(kappa > 0.0) || !std::isfinite(mu) ||
      !std::isfinite(mu_c) || !std::isfinite(kappa)) {
    std::ostringstream msg;
    msg << "metric parameters must be finite and positive (mu=" << mu << ", mu_c=" << mu_c
        << ", kappa=" << kappa << ")";
    throw Error(ErrorKind::invalid_argument, msg.str());
  }
}

SquareMat sym_part(const SquareMat& m) {
  const std::size_t n = m.dim();
  SquareMat s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

SquareMat skew_part(const SquareMat& m) {
  const std::size_t n = m.dim();
  SquareMat w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (m(i, j) - m(j, i));
  return w;
}

SquareMat dev_part(const SquareMat& m) {
  SquareMat d = m;
  const double mean = m.trace() / static_cast<double>(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) d(i, i) -= mean;
  return d;
}

double frob_inner(const SquareMat& m, const SquareMat& n) {
  require_same_dim(m, n, "frob_inner");
  const auto a = m.data();
  const auto b = n.data();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double iso_inner(const MetricParams& p, const SquareMat& m, const SquareMat& n) {
  require_same_dim(m, n, "iso_inner");
  const double dim = static_cast<double>(m.dim());
  return p.mu() * frob_inner(dev_part(sym_part(m)), dev_part(sym_part(n))) +
         p.mu_c() * frob_inner(skew_part(m), skew_part(n)) +
         (p.kappa() / dim) * m.trace() * n.trace();
}

double iso_norm(const MetricParams& p, const SquareMat& m) {
  // Clamp tiny negative round-off; the form is positive definite.
  return std::sqrt(std::max(0.0, iso_inner(p, m, m)));
}

double metric_at(const MetricParams& p, const SquareMat& a, const SquareMat& m,
                 const SquareMat& n) {
  require_same_dim(a, m, "metric_at");
  require_same_dim(a, n, "metric_at");
  const SquareMat a_inv = inverse(a);
  return iso_inner(p, a_inv * m, a_inv * n);
}

SquareMat commutator(const SquareMat& a, const SquareMat& b) { return a * b - b * a; }

namespace {

SquareMat minor_matrix(const SquareMat& m, std::size_t row, std::size_t col) {
  const std::size_t n = m.dim();
  SquareMat out(n - 1);
  for (std::size_t i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (std::size_t j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

SquareMat cofactor(const SquareMat& m) {
  const std::size_t n = m.dim();
  SquareMat c(n);
  if (n == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  if (n == 2) {
    c(0, 0) = m(1, 1);
    c(0, 1) = -m(1, 0);
    c(1, 0) = -m(0, 1);
    c(1, 1) = m(0, 0);
    return c;
  }
  if (n == 3) {
    c(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    c(0, 1) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    c(0, 2) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    c(1, 0) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    c(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    c(1, 2) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    c(2, 0) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    c(2, 1) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    c(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return c;
  }
  // Signed minors through LU determinants; stays valid for singular M.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      c(i, j) = sign * determinant(minor_matrix(m, i, j));
    }
  }
  return c;
}

}  // namespace glgeo
