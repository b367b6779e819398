#include "glgeo/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "glgeo/geodesics.hpp"
#include "glgeo/matrix_functions.hpp"

namespace glgeo {

namespace {

constexpr double kDampingMin = 1e-12;
constexpr double kDampingMax = 1e6;
constexpr double kDedupDistance = 1e-6;
constexpr int kStartRound = 8;
constexpr int kStallWindow = 10;

struct StartOutcome {
  SquareMat tangent;
  double residual;
  bool converged;
};

double relative_residual(const SquareMat& value, const SquareMat& target, double target_norm) {
  return frobenius_distance(value, target) / target_norm;
}

// Levenberg-Marquardt with Marquardt diagonal scaling on r(M) = vec(Phi(M) - C) / |C|.
StartOutcome run_levenberg_marquardt(const SquareMat& c, double target_norm, double omega,
                                     SquareMat m, const SolverOptions& opts) {
  const std::size_t n = c.dim();
  const std::size_t dof = n * n;
  double damping = opts.damping_init;

  auto evaluate = [&](const SquareMat& tangent) -> std::optional<GeodesicExponential> {
    if (!tangent.all_finite()) return std::nullopt;
    GeodesicExponential phi(tangent, omega);
    if (!phi.value().all_finite()) return std::nullopt;
    return phi;
  };

  std::optional<GeodesicExponential> phi = evaluate(m);
  if (!phi) return {std::move(m), std::numeric_limits<double>::infinity(), false};
  double residual = relative_residual(phi->value(), c, target_norm);

  double checkpoint = residual;
  for (int iter = 0; iter < opts.max_iterations && residual > opts.residual_tol; ++iter) {
    if (iter > 0 && iter % kStallWindow == 0) {
      // Converging runs are at least linear; anything slower sits at a
      // nonzero-residual local minimum.
      if (residual > 0.5 * checkpoint) break;
      checkpoint = residual;
    }
    // Jacobian columns: DPhi[M].E_k for the unit matrices E_k.
    SquareMat jac(dof);
    const std::vector<SquareMat> columns = phi->unit_derivatives();
    for (std::size_t k = 0; k < dof; ++k) {
      for (std::size_t r = 0; r < dof; ++r) jac(r, k) = columns[k].data()[r] / target_norm;
    }
    std::vector<double> res(dof);
    for (std::size_t r = 0; r < dof; ++r) {
      res[r] = (phi->value().data()[r] - c.data()[r]) / target_norm;
    }
    SquareMat normal(dof);
    std::vector<double> gradient(dof, 0.0);
    for (std::size_t i = 0; i < dof; ++i) {
      for (std::size_t j = i; j < dof; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < dof; ++r) s += jac(r, i) * jac(r, j);
        normal(i, j) = s;
        normal(j, i) = s;
      }
      for (std::size_t r = 0; r < dof; ++r) gradient[i] -= jac(r, i) * res[r];
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < dof; ++i) max_diag = std::max(max_diag, normal(i, i));

    bool accepted = false;
    while (!accepted) {
      SquareMat damped = normal;
      for (std::size_t i = 0; i < dof; ++i) {
        damped(i, i) += damping * std::max(normal(i, i), 1e-12 * max_diag);
      }
      const LuDecomposition lu(damped);
      if (!lu.is_singular()) {
        const std::vector<double> step = lu.solve(gradient);
        SquareMat trial = m;
        for (std::size_t k = 0; k < dof; ++k) trial.data()[k] += step[k];
        if (auto trial_phi = evaluate(trial)) {
          const double trial_residual = relative_residual(trial_phi->value(), c, target_norm);
          if (trial_residual < residual) {
            m = std::move(trial);
            phi = std::move(trial_phi);
            residual = trial_residual;
            damping = std::max(damping / 10.0, kDampingMin);
            accepted = true;
            continue;
          }
        }
      }
      if (damping >= kDampingMax) break;
      damping = std::min(damping * 10.0, kDampingMax);
    }
    if (!accepted) break;  // stalled at the damping ceiling
  }
  return {std::move(m), residual, residual <= opts.residual_tol};
}

// Lexicographic entry order; breaks iso_norm ties deterministically.
bool entries_less(const SquareMat& a, const SquareMat& b) {
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(),
                                      b.data().end());
}

std::vector<SquareMat> deterministic_starts(const SquareMat& c, const SolverOptions& opts) {
  const std::size_t n = c.dim();
  std::vector<SquareMat> starts;
  starts.push_back(SquareMat::zeros(n));

  if (is_normal(c, 1e-9)) {
    try {
      for (auto& branch : normal_log(c, opts.max_winding)) starts.push_back(std::move(branch.value));
    } catch (const Error&) {
      // e.g. odd multiplicity of a negative eigenvalue; other starts remain.
    }
  }

  try {
    const PolarDecomposition polar = polar_decompose(c);
    const SquareMat log_right = log_psym(polar.stretch);
    const SquareMat log_left = polar.rotation * log_right * polar.rotation.transposed();
    for (const auto& branch : normal_log(polar.rotation, opts.max_winding)) {
      const SquareMat rot = skew_part(branch.value);
      starts.push_back(log_right + rot);
      starts.push_back(log_left + rot);
    }
  } catch (const Error&) {
    // Rotation factor without a real normal log; zero and random starts remain.
  }

  if (starts.size() > static_cast<std::size_t>(opts.max_starts)) {
    starts.erase(starts.begin() + opts.max_starts, starts.end());
  }
  return starts;
}

std::vector<StartOutcome> run_starts(const SquareMat& c, double target_norm, double omega,
                                     const std::vector<SquareMat>& starts,
                                     const SolverOptions& opts, Execution exec) {
  std::vector<StartOutcome> outcomes(starts.size(),
                                     StartOutcome{SquareMat(c.dim()), 0.0, false});
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(starts.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      outcomes[i] = run_levenberg_marquardt(c, target_norm, omega, starts[i], opts);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      outcomes[i] = run_levenberg_marquardt(c, target_norm, omega, starts[i], opts);
    }
  }
  return outcomes;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(residual_tol > 0.0) || max_iterations < 1 || max_starts < 1 || max_winding < 0 ||
      !(damping_init > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "SolverOptions: bounds must be positive");
  }
}

std::string_view to_string(DistanceStatus status) {
  switch (status) {
    case DistanceStatus::exact_closed_form:
      return "exact_closed_form";
    case DistanceStatus::solver_converged:
      return "solver_converged";
    case DistanceStatus::best_upper_bound:
      return "best_upper_bound";
    case DistanceStatus::infinite:
      return "infinite";
  }
  return "unknown";
}

LogBvpSolution solve_log_bvp_report(const SquareMat& c, const MetricParams& p,
                                    const SolverOptions& opts, Execution exec) {
  opts.validate();
  const double det = determinant(c);
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "solve_log_bvp: det C = " << det << " is not positive";
    throw Error(ErrorKind::domain, msg.str());
  }
  const double target_norm = c.frobenius_norm();
  const double omega = p.omega();

  LogBvpSolution solution;
  std::vector<SquareMat> converged;
  double best_residual = std::numeric_limits<double>::infinity();

  // Merge in start order so the result is independent of scheduling.
  auto absorb = [&](std::vector<StartOutcome>& outcomes) {
    for (auto& o : outcomes) {
      ++solution.starts_used;
      if (o.converged) {
        ++solution.converged_starts;
        converged.push_back(o.tangent);
      }
      if (o.residual < best_residual) {
        best_residual = o.residual;
        solution.best_attempt = o.tangent;
      }
    }
  };
  auto smallest_norm = [&]() {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : converged) best = std::min(best, iso_norm(p, m));
    return best;
  };

  // Deterministic starts go in rounds, shortest first; like the seeded rounds
  // below, they stop once a round fails to shorten the best candidate.
  std::vector<SquareMat> starts = deterministic_starts(c, opts);
  std::stable_sort(starts.begin(), starts.end(), [&](const SquareMat& a, const SquareMat& b) {
    return iso_norm(p, a) < iso_norm(p, b);
  });
  for (std::size_t first = 0; first < starts.size(); first += kStartRound) {
    const double before = smallest_norm();
    const std::size_t last = std::min(starts.size(), first + kStartRound);
    std::vector<SquareMat> round(starts.begin() + static_cast<std::ptrdiff_t>(first),
                                 starts.begin() + static_cast<std::ptrdiff_t>(last));
    auto outcomes = run_starts(c, target_norm, omega, round, opts, exec);
    absorb(outcomes);
    if (!converged.empty() && !(smallest_norm() < before - 1e-9)) break;
  }

  // Seeded perturbation rounds around the current best tangent.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> spread(0.05, 1.0);
  const std::size_t n = c.dim();
  while (solution.starts_used < opts.max_starts) {
    const double before = smallest_norm();
    SquareMat center = SquareMat::zeros(n);
    if (!converged.empty()) {
      center = *std::min_element(converged.begin(), converged.end(),
                                 [&](const SquareMat& a, const SquareMat& b) {
                                   return iso_norm(p, a) < iso_norm(p, b);
                                 });
    } else if (solution.best_attempt) {
      center = *solution.best_attempt;
    }
    const double radius = 1.0 + center.frobenius_norm();
    const int round = std::min(kStartRound, opts.max_starts - solution.starts_used);
    starts.clear();
    for (int k = 0; k < round; ++k) {
      SquareMat trial = center;
      const double sigma = radius * spread(rng) / std::sqrt(static_cast<double>(n));
      for (double& v : trial.data()) v += sigma * gauss(rng);
      starts.push_back(std::move(trial));
    }
    auto outcomes = run_starts(c, target_norm, omega, starts, opts, exec);
    absorb(outcomes);
    if (!converged.empty() && !(smallest_norm() < before - 1e-9)) break;
  }

  solution.best_attempt_residual = best_residual;

  std::vector<std::pair<double, SquareMat>> ranked;
  ranked.reserve(converged.size());
  for (auto& m : converged) ranked.emplace_back(iso_norm(p, m), std::move(m));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return entries_less(a.second, b.second);
  });
  for (auto& [norm, m] : ranked) {
    const bool duplicate =
        std::any_of(solution.candidates.begin(), solution.candidates.end(),
                    [&](const SquareMat& kept) { return frobenius_distance(kept, m) <= kDedupDistance; });
    if (!duplicate) solution.candidates.push_back(std::move(m));
  }
  return solution;
}

std::vector<SquareMat> solve_log_bvp(const SquareMat& c, const MetricParams& p,
                                     const SolverOptions& opts, Execution exec) {
  LogBvpSolution solution = solve_log_bvp_report(c, p, opts, exec);
  if (solution.candidates.empty()) {
    std::ostringstream msg;
    msg << "solve_log_bvp: no start converged (best relative residual "
        << solution.best_attempt_residual << ")";
    throw Error(ErrorKind::not_converged, msg.str());
  }
  return std::move(solution.candidates);
}

DistanceResult geodesic_distance(const DistanceQuery& q, Execution exec) {
  require_same_dim(q.from, q.to, "geodesic_distance");
  q.options.validate();
  const std::size_t n = q.from.dim();
  if (reciprocal_condition(q.from) < 1e-12 || reciprocal_condition(q.to) < 1e-12) {
    throw Error(ErrorKind::singular, "geodesic_distance: singular endpoint");
  }
  const double det_a = determinant(q.from);
  const double det_b = determinant(q.to);
  if ((det_a > 0.0) != (det_b > 0.0)) {
    return {SquareMat::zeros(n), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::quiet_NaN(), 0, 0, DistanceStatus::infinite};
  }

  if (n == 1) {
    const double ratio = q.to(0, 0) / q.from(0, 0);
    const double log_ratio = std::log(ratio);
    SquareMat minimizer(1);
    minimizer(0, 0) = log_ratio;
    return {minimizer, dist_gl1(std::abs(q.from(0, 0)), std::abs(q.to(0, 0)), q.params.kappa()),
            std::abs(std::exp(log_ratio) - ratio) / ratio, 0, 0,
            DistanceStatus::exact_closed_form};
  }

  // Left invariance: d(A, B) = d(Id, A^-1 B); also covers both endpoints in GL-(n).
  const SquareMat c = solve(q.from, q.to);
  LogBvpSolution solution = solve_log_bvp_report(c, q.params, q.options, exec);
  const double target_norm = c.frobenius_norm();
  const double omega = q.params.omega();

  if (!solution.candidates.empty()) {
    SquareMat best = solution.candidates.front();
    const double residual =
        relative_residual(GeodesicExponential(best, omega).value(), c, target_norm);
    const double value = iso_norm(q.params, best);
    return {std::move(best), value, residual, solution.starts_used, solution.converged_starts,
            DistanceStatus::solver_converged};
  }
  SquareMat best = solution.best_attempt.value_or(SquareMat::zeros(n));
  const double value = iso_norm(q.params, best);
  return {std::move(best), value, solution.best_attempt_residual, solution.starts_used, 0,
          DistanceStatus::best_upper_bound};
}

double dist_gl1(double p_val, double q_val, double kappa) {
  if (!(p_val > 0.0) || !(q_val > 0.0) || !(kappa > 0.0)) {
    throw Error(ErrorKind::domain, "dist_gl1: arguments must be positive");
  }
  return std::sqrt(kappa) * std::abs(std::log(q_val / p_val));
}

double dist_identity_normal(const SquareMat& a, const MetricParams& p, int max_winding) {
  const auto branches = normal_log(a, max_winding);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : branches) best = std::min(best, iso_norm(p, b.value));
  return best;
}

double dist_to_SOn(const SquareMat& f, double mu, double kappa) {
  if (!(mu > 0.0) || !(kappa > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "dist_to_SOn: mu and kappa must be positive");
  }
  const PolarDecomposition polar = polar_decompose(f);
  const SquareMat log_u = log_psym(polar.stretch);
  const double dev = dev_part(log_u).frobenius_norm();
  const double tr = log_u.trace();
  return std::sqrt(mu * dev * dev + (kappa / static_cast<double>(f.dim())) * tr * tr);
}

}  // namespace glgeo
