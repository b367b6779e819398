#pragma once

#include "glgeo/matrix.hpp"

namespace glgeo {

/// Weights (mu, mu_c, kappa) of the isotropic inner product on gl(n):
/// mu on the deviatoric symmetric part, mu_c on the skew part and kappa on
/// the trace part. All three must be strictly positive.
class MetricParams {
 public:
  MetricParams(double mu, double mu_c, double kappa);

  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double mu_c() const noexcept { return mu_c_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  /// Coupling ratio mu_c / mu entering the closed-form geodesics.
  [[nodiscard]] double omega() const noexcept { return mu_c_ / mu_; }

  static MetricParams canonical() { return {1.0, 1.0, 1.0}; }

  friend bool operator==(const MetricParams&, const MetricParams&) = default;

 private:
  double mu_;
  double mu_c_;
  double kappa_;
};

SquareMat sym_part(const SquareMat& m);
SquareMat skew_part(const SquareMat& m);
SquareMat dev_part(const SquareMat& m);

/// tr(M^T N).
double frob_inner(const SquareMat& m, const SquareMat& n);

double iso_inner(const MetricParams& p, const SquareMat& m, const SquareMat& n);
double iso_norm(const MetricParams& p, const SquareMat& m);

/// Left-invariant metric g_A(M, N) = <A^-1 M, A^-1 N>_{mu,mu_c,kappa}.
/// Throws ErrorKind::singular if A fails the 1e-12 reciprocal-condition guard.
double metric_at(const MetricParams& p, const SquareMat& a, const SquareMat& m,
                 const SquareMat& n);

/// [A, B] = AB - BA.
SquareMat commutator(const SquareMat& a, const SquareMat& b);

/// Cofactor matrix, defined for singular input too. Adj(M) = Cof(M)^T.
SquareMat cofactor(const SquareMat& m);

}  // namespace glgeo
