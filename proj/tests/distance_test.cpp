#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "glgeo/algebra.hpp"
#include "glgeo/distance.hpp"
#include "glgeo/geodesics.hpp"
#include "glgeo/matrix_functions.hpp"
#include "support.hpp"

namespace glgeo {
namespace {

using std::numbers::pi;
using testing::rel_err;
using testing::Rng;

DistanceResult distance(const SquareMat& a, const SquareMat& b, const MetricParams& p,
                        Execution exec = Execution::parallel) {
  return geodesic_distance({a, b, p, SolverOptions{}}, exec);
}

void expect_sound(const DistanceResult& r, const MetricParams& p) {
  ASSERT_NE(r.status, DistanceStatus::infinite);
  ASSERT_NE(r.status, DistanceStatus::best_upper_bound);
  EXPECT_LE(r.residual, 1e-10);
  EXPECT_NEAR(r.value, iso_norm(p, r.minimizer), 1e-13);
}

TEST(SolverOptions, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.max_winding = 0;
  EXPECT_NO_THROW(o.validate());
  o.max_starts = 0;
  EXPECT_THROW(o.validate(), Error);
  o = {};
  o.residual_tol = 0.0;
  EXPECT_THROW(o.validate(), Error);
  o = {};
  o.damping_init = -1.0;
  EXPECT_THROW(o.validate(), Error);
}

TEST(SolveLogBvp, IdentityGivesZero) {
  const auto candidates = solve_log_bvp(SquareMat::identity(3), {1, 2, 3}, {});
  ASSERT_FALSE(candidates.empty());
  EXPECT_EQ(candidates.front(), SquareMat::zeros(3));
}

TEST(SolveLogBvp, SymmetricLogIsACandidate) {
  Rng rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
    const SquareMat s = sym_part(rng.matrix_with_norm(n, rng.uniform(0.1, 2.0)));
    const auto candidates = solve_log_bvp(mat_exp(s), rng.params(), {});
    const bool found = std::any_of(candidates.begin(), candidates.end(),
                                   [&](const SquareMat& m) { return frobenius_distance(m, s) <= 1e-7; });
    EXPECT_TRUE(found);
  }
}

TEST(SolveLogBvp, RecoversGeneratingTangent) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
    const MetricParams p = rng.params();
    SquareMat m = rng.matrix(n);
    m *= rng.uniform(0.05, 1.0) / iso_norm(p, m);
    const SquareMat c = GeodesicExponential(m, p.omega()).value();
    const auto candidates = solve_log_bvp(c, p, {});
    const bool found = std::any_of(candidates.begin(), candidates.end(),
                                   [&](const SquareMat& x) { return frobenius_distance(x, m) <= 1e-7; });
    EXPECT_TRUE(found) << "trial " << trial;
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      EXPECT_LE(iso_norm(p, candidates[k - 1]), iso_norm(p, candidates[k]));
      EXPECT_GT(frobenius_distance(candidates[k - 1], candidates[k]), 1e-6);
    }
    for (const auto& x : candidates) {
      const SquareMat phi = GeodesicExponential(x, p.omega()).value();
      EXPECT_LE(frobenius_distance(phi, c), 1e-10 * c.frobenius_norm());
    }
  }
}

TEST(SolveLogBvp, RejectsWrongComponent) {
  try {
    solve_log_bvp(SquareMat::diagonal({-1, 1}), {1, 1, 1}, {});
    FAIL() << "expected domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(SolveLogBvp, ExhaustedBudgetReportsBestAttempt) {
  SolverOptions opts;
  opts.max_starts = 1;
  opts.max_iterations = 1;
  const SquareMat c = mat_exp(SquareMat{{0.3, 1.2}, {-0.4, 0.1}});
  const LogBvpSolution sol = solve_log_bvp_report(c, {1, 2, 1}, opts);
  EXPECT_TRUE(sol.candidates.empty());
  EXPECT_EQ(sol.starts_used, 1);
  ASSERT_TRUE(sol.best_attempt.has_value());
  EXPECT_GT(sol.best_attempt_residual, opts.residual_tol);
  try {
    solve_log_bvp(c, {1, 2, 1}, opts);
    FAIL() << "expected not_converged";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_converged);
  }
}

TEST(GeodesicDistance, SamePointIsZero) {
  Rng rng(62);
  const SquareMat a = rng.gl_plus(3);
  const DistanceResult r = distance(a, a, {1, 1, 1});
  expect_sound(r, {1, 1, 1});
  EXPECT_LE(r.value, 1e-12);
  EXPECT_LE(r.minimizer.max_abs(), 1e-12);
}

TEST(GeodesicDistance, DeviatoricStretchNearIdentity) {
  Rng rng(63);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
    const MetricParams p = rng.params();
    SquareMat s = dev_part(rng.symmetric(n));
    s *= rng.uniform(0.05, 0.5) / iso_norm(p, s);
    const DistanceResult r = distance(SquareMat::identity(n), mat_exp(s), p);
    expect_sound(r, p);
    EXPECT_NEAR(r.value, iso_norm(p, s), 1e-7);
  }
}

TEST(GeodesicDistance, DifferentComponentsAreInfinite) {
  const DistanceResult r = distance(SquareMat::identity(2), SquareMat::diagonal({1, -2}), {1, 1, 1});
  EXPECT_EQ(r.status, DistanceStatus::infinite);
  EXPECT_EQ(r.value, std::numeric_limits<double>::infinity());
}

TEST(GeodesicDistance, NegativeComponentReducesToPositive) {
  Rng rng(64);
  const MetricParams p{1, 2, 1};
  const SquareMat flip = SquareMat::diagonal({-1, 1, 1});
  const SquareMat a = flip * rng.gl_plus(3);
  const SquareMat b = flip * rng.gl_plus(3);
  const DistanceResult neg = distance(a, b, p);
  const DistanceResult pos = distance(flip * a, flip * b, p);
  expect_sound(neg, p);
  EXPECT_NEAR(neg.value, pos.value, 1e-9);
}

TEST(GeodesicDistance, SingularEndpointIsRejected) {
  try {
    distance(SquareMat::identity(2), SquareMat{{1, 2}, {2, 4}}, {1, 1, 1});
    FAIL() << "expected singular error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular);
  }
}

TEST(GeodesicDistance, OneByOneUsesClosedForm) {
  Rng rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = rng.uniform(0.1, 5.0);
    const double b = rng.uniform(0.1, 5.0);
    const double kappa = rng.uniform(0.2, 4.0);
    const MetricParams p{rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0), kappa};
    const DistanceResult r = distance(SquareMat{{a}}, SquareMat{{b}}, p);
    EXPECT_EQ(r.status, DistanceStatus::exact_closed_form);
    EXPECT_NEAR(r.value, dist_gl1(a, b, kappa), 1e-12);
    EXPECT_NEAR(r.value, iso_norm(p, r.minimizer), 1e-13);
    const DistanceResult neg = distance(SquareMat{{-a}}, SquareMat{{-b}}, p);
    EXPECT_NEAR(neg.value, r.value, 1e-12);
  }
  EXPECT_EQ(distance(SquareMat{{1.0}}, SquareMat{{-1.0}}, {1, 1, 1}).status, DistanceStatus::infinite);
}

TEST(GeodesicDistance, MetricAxioms) {
  Rng rng(66);
  const MetricParams p{1.0, 0.6, 1.4};
  auto near_id = [&](std::size_t n) { return mat_exp(rng.matrix_with_norm(n, 0.4)); };
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
    const SquareMat a = near_id(n);
    const SquareMat b = near_id(n);
    const SquareMat c = near_id(n);
    const DistanceResult ab = distance(a, b, p);
    const DistanceResult ba = distance(b, a, p);
    const DistanceResult bc = distance(b, c, p);
    const DistanceResult ac = distance(a, c, p);
    expect_sound(ab, p);
    expect_sound(ba, p);
    EXPECT_NEAR(ab.value, ba.value, 1e-6 * (1.0 + ab.value));
    EXPECT_LE(ac.value, ab.value + bc.value + 1e-6);

    const SquareMat left = rng.gl_plus(n);
    EXPECT_NEAR(distance(left * a, left * b, p).value, ab.value, 1e-6);
    const SquareMat q = rng.rotation(n);
    EXPECT_NEAR(distance(a * q, b * q, p).value, ab.value, 1e-6);
  }
}

TEST(GeodesicDistance, SerialAndParallelAgreeBitForBit) {
  Rng rng(67);
  for (int trial = 0; trial < 3; ++trial) {
    const SquareMat b = mat_exp(rng.matrix_with_norm(3, 1.5));
    const MetricParams p = rng.params();
    const DistanceResult s = distance(SquareMat::identity(3), b, p, Execution::serial);
    const DistanceResult q = distance(SquareMat::identity(3), b, p, Execution::parallel);
    EXPECT_EQ(s.minimizer, q.minimizer);
    EXPECT_EQ(s.value, q.value);
    EXPECT_EQ(s.residual, q.residual);
    EXPECT_EQ(s.starts_used, q.starts_used);
    EXPECT_EQ(s.status, q.status);
  }
}

TEST(GeodesicDistance, FixedSeedIsReproducible) {
  const SquareMat b = mat_exp(SquareMat{{0.2, 0.9}, {-0.5, -0.1}});
  const MetricParams p{1, 1.5, 1};
  SolverOptions o1;
  SolverOptions o2;
  o2.seed = 12345;
  const DistanceResult r1 = geodesic_distance({SquareMat::identity(2), b, p, o1});
  const DistanceResult r1again = geodesic_distance({SquareMat::identity(2), b, p, o1});
  const DistanceResult r2 = geodesic_distance({SquareMat::identity(2), b, p, o2});
  EXPECT_EQ(r1.minimizer, r1again.minimizer);
  EXPECT_NEAR(r1.value, r2.value, 1e-9);
}

TEST(DistGl1, Examples) {
  EXPECT_EQ(dist_gl1(1, 1, 3), 0.0);
  EXPECT_NEAR(dist_gl1(1, std::exp(2.0), 1), 2.0, 1e-15);
  EXPECT_NEAR(dist_gl1(2, 0.5, 4), 2 * std::log(4.0), 1e-15);
  EXPECT_THROW(dist_gl1(0, 1, 1), Error);
  EXPECT_THROW(dist_gl1(1, -1, 1), Error);
  EXPECT_THROW(dist_gl1(1, 1, 0), Error);
}

TEST(DistIdentityNormal, Examples) {
  EXPECT_EQ(dist_identity_normal(SquareMat::identity(3), {1, 1, 1}), 0.0);
  Rng rng(68);
  const MetricParams p = rng.params();
  const SquareMat s = 0.3 * rng.symmetric(3);
  const double want = std::sqrt(p.mu() * std::pow(dev_part(s).frobenius_norm(), 2) +
                                p.kappa() / 3.0 * s.trace() * s.trace());
  EXPECT_NEAR(dist_identity_normal(mat_exp(s), p), want, 1e-10);
  EXPECT_NEAR(dist_identity_normal(testing::rotation2(pi / 2), {1, 1, 1}, 2), pi / 2 * std::sqrt(2.0), 1e-12);
  EXPECT_THROW(dist_identity_normal(SquareMat{{1, 1}, {0, 1}}, {1, 1, 1}), Error);
}

TEST(DistIdentityNormal, UpperBoundsSolverDistance) {
  Rng rng(69);
  for (int trial = 0; trial < 5; ++trial) {
    const MetricParams p = rng.params();
    const SquareMat a = testing::rotation2(rng.uniform(-3, 3)) * std::exp(rng.uniform(-0.5, 0.5));
    const DistanceResult r = distance(SquareMat::identity(2), a, p);
    expect_sound(r, p);
    EXPECT_LE(r.value, dist_identity_normal(a, p) + 1e-8);
  }
}

TEST(DistToSOn, Examples) {
  Rng rng(70);
  EXPECT_NEAR(dist_to_SOn(rng.rotation(3), 1.3, 0.7), 0.0, 1e-12);
  const double e = std::exp(1.0);
  EXPECT_NEAR(dist_to_SOn(SquareMat::diagonal({e, e}), 1, 1), std::sqrt(2.0), 1e-12);
  EXPECT_THROW(dist_to_SOn(SquareMat::diagonal({1, -1}), 1, 1), Error);
  EXPECT_THROW(dist_to_SOn(SquareMat::identity(2), 0, 1), Error);
}

TEST(DistToSOn, RotationInvariant) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 4));
    const SquareMat f = rng.gl_plus(n);
    const SquareMat q = rng.rotation(n);
    const double d = dist_to_SOn(f, 1.2, 0.8);
    EXPECT_NEAR(dist_to_SOn(q * f, 1.2, 0.8), d, 1e-10);
    EXPECT_NEAR(dist_to_SOn(f * q, 1.2, 0.8), d, 1e-10);
  }
}

TEST(DistToSOn, MatchesSolverDistanceToPolarRotation) {
  Rng rng(72);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.pick(2, 3));
    const MetricParams p = rng.params();
    const SquareMat s = sym_part(rng.matrix_with_norm(n, rng.uniform(0.05, 0.5)));
    const SquareMat f = rng.rotation(n) * mat_exp(s);
    const PolarDecomposition pd = polar_decompose(f);
    const DistanceResult r = distance(pd.rotation, f, p);
    expect_sound(r, p);
    EXPECT_NEAR(r.value, dist_to_SOn(f, p.mu(), p.kappa()), 1e-6);
  }
}

}  // namespace
}  // namespace glgeo
