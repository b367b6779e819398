#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "glgeo/algebra.hpp"
#include "glgeo/matrix.hpp"

// Independent reference computations and seeded generators shared by the unit
// and acceptance tests. Nothing here calls into the matrix_functions kernels.
namespace glgeo::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gauss() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  SquareMat matrix(std::size_t n) {
    SquareMat m(n);
    for (double& v : m.data()) v = gauss();
    return m;
  }

  SquareMat symmetric(std::size_t n) { return sym_part(matrix(n)); }

  /// Random matrix with Frobenius norm exactly `norm`.
  SquareMat matrix_with_norm(std::size_t n, double norm) {
    SquareMat m = matrix(n);
    return m * (norm / m.frobenius_norm());
  }

  /// Well-conditioned element of GL+(n): Id + 0.3 G with a sign fix on det.
  SquareMat gl_plus(std::size_t n) {
    for (;;) {
      SquareMat a = SquareMat::identity(n) + 0.3 * matrix(n);
      const double det = determinant(a);
      if (det > 0.2) return a;
    }
  }

  /// Haar-ish orthogonal matrix by Gram-Schmidt on a Gaussian matrix.
  SquareMat orthogonal(std::size_t n) {
    SquareMat g = matrix(n);
    SquareMat q(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = g(i, j);
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, k) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, k);
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / norm;
    }
    return q;
  }

  SquareMat rotation(std::size_t n) {
    SquareMat q = orthogonal(n);
    if (determinant(q) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) q(i, 0) = -q(i, 0);
    }
    return q;
  }

  MetricParams params() { return {uniform(0.3, 3.0), uniform(0.3, 3.0), uniform(0.3, 3.0)}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double rel_err(const SquareMat& got, const SquareMat& want) {
  return frobenius_distance(got, want) / std::max(1.0, want.frobenius_norm());
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

/// exp by plain Taylor summation after scaling by 2^-s, then squaring.
inline SquareMat taylor_exp(const SquareMat& m, int terms = 30) {
  int s = 0;
  double norm = m.frobenius_norm();
  while (norm > 0.5) {
    norm *= 0.5;
    ++s;
  }
  const SquareMat scaled = m * std::ldexp(1.0, -s);
  const std::size_t n = m.dim();
  SquareMat sum = SquareMat::identity(n);
  SquareMat term = SquareMat::identity(n);
  for (int k = 1; k < terms; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule by Newton iteration on P_n, mapped to [0, 1].
inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre rule;
  const double pi = std::acos(-1.0);
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

/// int_0^1 exp(sM) T exp((1-s)M) ds with Taylor exponentials.
inline SquareMat dexp_quadrature(const SquareMat& m, const SquareMat& t, int points = 64) {
  const GaussLegendre rule = gauss_legendre(points);
  SquareMat sum(m.dim());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double s = rule.nodes[k];
    sum += rule.weights[k] * (taylor_exp(s * m) * t * taylor_exp((1.0 - s) * m));
  }
  return sum;
}

/// Entry-by-entry evaluation of mu <dev sym M, dev sym N> + mu_c <skew M, skew N>
/// + (kappa / n) tr M tr N.
inline double brute_iso_inner(const MetricParams& p, const SquareMat& m, const SquareMat& nn) {
  const std::size_t n = m.dim();
  double tr_m = 0.0;
  double tr_n = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tr_m += m(i, i);
    tr_n += nn(i, i);
  }
  double dev = 0.0;
  double skew = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sm = 0.5 * (m(i, j) + m(j, i));
      double sn = 0.5 * (nn(i, j) + nn(j, i));
      if (i == j) {
        sm -= tr_m / static_cast<double>(n);
        sn -= tr_n / static_cast<double>(n);
      }
      dev += sm * sn;
      skew += 0.25 * (m(i, j) - m(j, i)) * (nn(i, j) - nn(j, i));
    }
  }
  return p.mu() * dev + p.mu_c() * skew + p.kappa() / static_cast<double>(n) * tr_m * tr_n;
}

inline SquareMat rotation2(double theta) {
  return {{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

/// Phi(M) = exp(sym M - w skew M) exp((1+w) skew M) with Taylor exponentials.
inline SquareMat taylor_phi(const SquareMat& m, double omega) {
  return taylor_exp(sym_part(m) - omega * skew_part(m)) * taylor_exp((1.0 + omega) * skew_part(m));
}

}  // namespace glgeo::testing
