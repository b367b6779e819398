#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "glgeo/algebra.hpp"
#include "glgeo/execution.hpp"
#include "glgeo/matrix.hpp"

namespace glgeo {

struct SolverOptions {
  double residual_tol = 1e-10;
  int max_iterations = 200;
  int max_starts = 40;
  int max_winding = 2;
  std::uint64_t seed = 0;
  double damping_init = 1e-3;

  /// Throws ErrorKind::invalid_argument unless every bound is positive
  /// (max_winding may be zero).
  void validate() const;
};

enum class DistanceStatus { exact_closed_form, solver_converged, best_upper_bound, infinite };

std::string_view to_string(DistanceStatus status);

struct DistanceQuery {
  SquareMat from;
  SquareMat to;
  MetricParams params;
  SolverOptions options;
};

struct DistanceResult {
  SquareMat minimizer;
  double value;     // +inf when status == infinite
  double residual;  // |Phi(M) - A^-1 B|_F / |A^-1 B|_F
  int starts_used;
  int converged_starts;
  DistanceStatus status;
};

/// Outcome of the multi-start shooting solve for Phi(M) = C.
struct LogBvpSolution {
  /// Converged tangents, deduplicated, sorted by iso_norm ascending.
  std::vector<SquareMat> candidates;
  int starts_used = 0;
  int converged_starts = 0;
  /// Lowest-residual endpoint among all starts (meaningful when nothing converged).
  std::optional<SquareMat> best_attempt;
  double best_attempt_residual = 0.0;
};

/// Multi-start Levenberg-Marquardt solve of exp(sym M - w skew M) exp((1+w) skew M) = C.
LogBvpSolution solve_log_bvp_report(const SquareMat& c, const MetricParams& p,
                                    const SolverOptions& opts,
                                    Execution exec = Execution::parallel);

/// Converged candidates only; throws ErrorKind::not_converged if no start converged.
std::vector<SquareMat> solve_log_bvp(const SquareMat& c, const MetricParams& p,
                                     const SolverOptions& opts,
                                     Execution exec = Execution::parallel);

/// Geodesic distance d(A, B) = min |M| over Phi(M) = A^-1 B, certified as the
/// smallest converged candidate.
DistanceResult geodesic_distance(const DistanceQuery& q, Execution exec = Execution::parallel);

/// Distance on GL+(1): sqrt(kappa) |ln(q/p)|.
double dist_gl1(double p_val, double q_val, double kappa);

/// Smallest iso_norm over the real normal logarithms of a normal A.
double dist_identity_normal(const SquareMat& a, const MetricParams& p, int max_winding = 2);

/// Distance of F to SO(n): sqrt(mu |dev log U|^2 + (kappa/n) (tr log U)^2), U = sqrt(F^T F).
double dist_to_SOn(const SquareMat& f, double mu, double kappa);

}  // namespace glgeo
