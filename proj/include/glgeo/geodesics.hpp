#pragma once

#include <span>
#include <vector>

#include "glgeo/algebra.hpp"
#include "glgeo/execution.hpp"
#include "glgeo/matrix.hpp"

namespace glgeo {

/// Base point A (det A > 0), initial tangent M in identity coordinates, and
/// the metric. The geodesic is X(t) = A exp(t(sym M - w skew M)) exp(t(1+w) skew M).
class GeodesicSpec {
 public:
  GeodesicSpec(SquareMat base, SquareMat tangent, MetricParams params);

  [[nodiscard]] const SquareMat& base() const noexcept { return base_; }
  [[nodiscard]] const SquareMat& tangent() const noexcept { return tangent_; }
  [[nodiscard]] const MetricParams& params() const noexcept { return params_; }
  [[nodiscard]] std::size_t dim() const noexcept { return base_.dim(); }

 private:
  SquareMat base_;
  SquareMat tangent_;
  MetricParams params_;
};

/// Sampled curve in GL+(n): strictly increasing times, one point per time.
class DiscreteCurve {
 public:
  DiscreteCurve(std::vector<double> times, std::vector<SquareMat> points);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const std::vector<SquareMat>& points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.front().dim(); }

 private:
  std::vector<double> times_;
  std::vector<SquareMat> points_;
};

/// The geodesic exponential Phi(M) = exp(sym M - w skew M) exp((1+w) skew M)
/// with its directional derivative. Caches both exponential factors so that
/// repeated derivative evaluations (Jacobian columns) reuse them.
class GeodesicExponential {
 public:
  GeodesicExponential(const SquareMat& m, double omega);

  [[nodiscard]] const SquareMat& value() const noexcept { return value_; }
  /// DPhi[M].E by the product rule through both exponential factors.
  [[nodiscard]] SquareMat derivative(const SquareMat& direction) const;
  /// DPhi[M].E_k for every unit matrix E_k, k = i * n + j in row-major order.
  [[nodiscard]] std::vector<SquareMat> unit_derivatives() const;

 private:
  double omega_;
  SquareMat stretch_arg_;   // sym M - w skew M
  SquareMat rotation_arg_;  // (1 + w) skew M
  SquareMat stretch_exp_;
  SquareMat rotation_exp_;
  SquareMat value_;
};

SquareMat geodesic_point(const GeodesicSpec& spec, double t);
SquareMat geodesic_velocity(const GeodesicSpec& spec, double t);
/// U(t) = X(t)^-1 X'(t) = Q(t)^T M Q(t), Q(t) = exp(t(1+w) skew M).
SquareMat geodesic_tangent(const GeodesicSpec& spec, double t);
/// Length t0 |M|_{mu,mu_c,kappa} of the geodesic on [0, t0].
double geodesic_length_closed(const GeodesicSpec& spec, double t0);

/// Samples X(t) at the given strictly increasing times.
DiscreteCurve sample_geodesic(const GeodesicSpec& spec, std::span<const double> times,
                              Execution exec = Execution::parallel);
/// `samples` >= 2 uniformly spaced times on [t0, t1].
DiscreteCurve sample_geodesic(const GeodesicSpec& spec, double t0, double t1,
                              std::size_t samples, Execution exec = Execution::parallel);

struct GeodesicTrajectory {
  DiscreteCurve curve;
  std::vector<SquareMat> tangents;  // U at each sample
};

/// Classical RK4 on X' = X U, U' = ((1+w)/2)(U^T U - U U^T) with X(0) = A,
/// U(0) = M0 over `steps` equal steps on [0, t_end].
GeodesicTrajectory integrate_geodesic_trajectory(const SquareMat& a, const SquareMat& m0,
                                                 const MetricParams& p, double t_end,
                                                 std::size_t steps);
DiscreteCurve integrate_geodesic_ivp(const SquareMat& a, const SquareMat& m0,
                                     const MetricParams& p, double t_end, std::size_t steps);

/// Per-segment lengths |X_{i+1} - X_i|_g evaluated at the chord midpoint.
std::vector<double> segment_lengths(const DiscreteCurve& c, const MetricParams& p,
                                    Execution exec = Execution::parallel);
double curve_length(const DiscreteCurve& c, const MetricParams& p,
                    Execution exec = Execution::parallel);
double curve_energy(const DiscreteCurve& c, const MetricParams& p,
                    Execution exec = Execution::parallel);

/// Resamples the curve at equal arc-length steps onto uniform times over the
/// same interval, keeping endpoints and sample count.
DiscreteCurve reparam_constant_speed(const DiscreteCurve& c, const MetricParams& p);

/// Max over interior samples of |U' - ((1+w)/2)(U^T U - U U^T)|_F using central
/// differences on a uniform grid.
double geodesic_residual(const DiscreteCurve& c, const MetricParams& p);

/// Quantities constant along every geodesic tangent U(t).
struct ConservedQuantities {
  double norm;
  double trace;
  double determinant;
  double trace_cofactor;
};

ConservedQuantities conserved_quantities(const MetricParams& p, const SquareMat& u);

/// g_{Phi_A(M)}(DPhi_A[M].M, DPhi_A[M].T); equals <M, T>_{mu,mu_c,kappa}.
double gauss_pairing(const MetricParams& p, const SquareMat& a, const SquareMat& m,
                     const SquareMat& t);

}  // namespace glgeo
