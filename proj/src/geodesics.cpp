#include "glgeo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glgeo/matrix_functions.hpp"

namespace glgeo {

namespace {

void require_positive_det(const SquareMat& x, const char* what) {
  const double det = determinant(x);
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << what << ": determinant " << det << " is not positive";
    throw Error(ErrorKind::domain, msg.str());
  }
}

double geodesic_coupling(const MetricParams& p) { return 0.5 * (1.0 + p.omega()); }

// (U^T U - U U^T) scaled by (1 + w) / 2.
SquareMat tangent_rate(const SquareMat& u, double coupling) {
  const SquareMat ut = u.transposed();
  return coupling * (ut * u - u * ut);
}

}  // namespace

GeodesicSpec::GeodesicSpec(SquareMat base, SquareMat tangent, MetricParams params)
    : base_(std::move(base)), tangent_(std::move(tangent)), params_(params) {
  require_same_dim(base_, tangent_, "GeodesicSpec");
  require_positive_det(base_, "GeodesicSpec base");
}

DiscreteCurve::DiscreteCurve(std::vector<double> times, std::vector<SquareMat> points)
    : times_(std::move(times)), points_(std::move(points)) {
  if (times_.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "DiscreteCurve needs at least two samples");
  }
  if (times_.size() != points_.size()) {
    throw Error(ErrorKind::invalid_argument, "DiscreteCurve: times and points differ in length");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) {
      throw Error(ErrorKind::invalid_argument, "DiscreteCurve: non-finite time");
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error(ErrorKind::invalid_argument, "DiscreteCurve: times must be strictly increasing");
    }
    require_same_dim(points_.front(), points_[i], "DiscreteCurve");
    require_positive_det(points_[i], "DiscreteCurve point");
  }
}

GeodesicExponential::GeodesicExponential(const SquareMat& m, double omega)
    : omega_(omega),
      stretch_arg_(sym_part(m) - omega * skew_part(m)),
      rotation_arg_((1.0 + omega) * skew_part(m)),
      stretch_exp_(mat_exp(stretch_arg_)),
      rotation_exp_(mat_exp(rotation_arg_)),
      value_(stretch_exp_ * rotation_exp_) {}

SquareMat GeodesicExponential::derivative(const SquareMat& direction) const {
  const SquareMat e_sym = sym_part(direction);
  const SquareMat e_skew = skew_part(direction);
  return dexp(stretch_arg_, e_sym - omega_ * e_skew) * rotation_exp_ +
         stretch_exp_ * dexp(rotation_arg_, (1.0 + omega_) * e_skew);
}

std::vector<SquareMat> GeodesicExponential::unit_derivatives() const {
  const std::size_t n = value_.dim();
  // dexp is linear in the direction, so n^2 stretch derivatives and n(n-1)/2
  // rotation derivatives cover every unit direction.
  std::vector<SquareMat> stretch_d;
  stretch_d.reserve(n * n);
  SquareMat unit(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    unit.data()[k] = 1.0;
    stretch_d.push_back(dexp(stretch_arg_, unit));
    unit.data()[k] = 0.0;
  }
  std::vector<SquareMat> rotation_d(n * n, SquareMat(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      unit(a, b) = 0.5;
      unit(b, a) = -0.5;
      rotation_d[a * n + b] = (1.0 + omega_) * (stretch_exp_ * dexp(rotation_arg_, unit));
      rotation_d[b * n + a] = -rotation_d[a * n + b];
      unit(a, b) = 0.0;
      unit(b, a) = 0.0;
    }
  }
  std::vector<SquareMat> columns;
  columns.reserve(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      // sym E_ab - w skew E_ab = (1-w)/2 E_ab + (1+w)/2 E_ba
      SquareMat stretch_part =
          0.5 * (1.0 - omega_) * stretch_d[a * n + b] + 0.5 * (1.0 + omega_) * stretch_d[b * n + a];
      columns.push_back(stretch_part * rotation_exp_ + rotation_d[a * n + b]);
    }
  }
  return columns;
}

SquareMat geodesic_point(const GeodesicSpec& spec, double t) {
  return spec.base() * GeodesicExponential(t * spec.tangent(), spec.params().omega()).value();
}

SquareMat geodesic_velocity(const GeodesicSpec& spec, double t) {
  const double w = spec.params().omega();
  const SquareMat& m = spec.tangent();
  const SquareMat stretch = mat_exp(t * (sym_part(m) - w * skew_part(m)));
  const SquareMat rotation = mat_exp((t * (1.0 + w)) * skew_part(m));
  return spec.base() * stretch * m * rotation;
}

SquareMat geodesic_tangent(const GeodesicSpec& spec, double t) {
  const double w = spec.params().omega();
  const SquareMat q = mat_exp((t * (1.0 + w)) * skew_part(spec.tangent()));
  return q.transposed() * spec.tangent() * q;
}

double geodesic_length_closed(const GeodesicSpec& spec, double t0) {
  if (!(t0 >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "geodesic_length_closed: t0 must be non-negative");
  }
  return t0 * iso_norm(spec.params(), spec.tangent());
}

DiscreteCurve sample_geodesic(const GeodesicSpec& spec, std::span<const double> times,
                              Execution exec) {
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(times.size());
  std::vector<SquareMat> points(times.size(), SquareMat(spec.dim()));
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) points[i] = geodesic_point(spec, times[i]);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) points[i] = geodesic_point(spec, times[i]);
  }
  return DiscreteCurve(std::vector<double>(times.begin(), times.end()), std::move(points));
}

DiscreteCurve sample_geodesic(const GeodesicSpec& spec, double t0, double t1,
                              std::size_t samples, Execution exec) {
  if (samples < 2) {
    throw Error(ErrorKind::invalid_argument, "sample_geodesic: need at least two samples");
  }
  std::vector<double> times(samples);
  const double h = (t1 - t0) / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) times[i] = t0 + h * static_cast<double>(i);
  times.back() = t1;
  return sample_geodesic(spec, times, exec);
}

GeodesicTrajectory integrate_geodesic_trajectory(const SquareMat& a, const SquareMat& m0,
                                                 const MetricParams& p, double t_end,
                                                 std::size_t steps) {
  require_same_dim(a, m0, "integrate_geodesic_ivp");
  require_positive_det(a, "integrate_geodesic_ivp initial point");
  if (steps < 1) {
    throw Error(ErrorKind::invalid_argument, "integrate_geodesic_ivp: steps must be >= 1");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::invalid_argument, "integrate_geodesic_ivp: t_end must be positive");
  }
  const double coupling = geodesic_coupling(p);
  const double h = t_end / static_cast<double>(steps);

  auto check_stage = [](const SquareMat& x) {
    if (!(determinant(x) > 0.0)) {
      throw Error(ErrorKind::not_converged,
                  "integrate_geodesic_ivp: determinant left GL+(n); reduce the step size");
    }
  };

  std::vector<double> times(steps + 1);
  std::vector<SquareMat> points;
  std::vector<SquareMat> tangents;
  points.reserve(steps + 1);
  tangents.reserve(steps + 1);
  SquareMat x = a;
  SquareMat u = m0;
  times[0] = 0.0;
  points.push_back(x);
  tangents.push_back(u);

  for (std::size_t k = 0; k < steps; ++k) {
    const SquareMat kx1 = x * u;
    const SquareMat ku1 = tangent_rate(u, coupling);

    const SquareMat x2 = x + (0.5 * h) * kx1;
    const SquareMat u2 = u + (0.5 * h) * ku1;
    check_stage(x2);
    const SquareMat kx2 = x2 * u2;
    const SquareMat ku2 = tangent_rate(u2, coupling);

    const SquareMat x3 = x + (0.5 * h) * kx2;
    const SquareMat u3 = u + (0.5 * h) * ku2;
    check_stage(x3);
    const SquareMat kx3 = x3 * u3;
    const SquareMat ku3 = tangent_rate(u3, coupling);

    const SquareMat x4 = x + h * kx3;
    const SquareMat u4 = u + h * ku3;
    check_stage(x4);
    const SquareMat kx4 = x4 * u4;
    const SquareMat ku4 = tangent_rate(u4, coupling);

    x += (h / 6.0) * (kx1 + 2.0 * kx2 + 2.0 * kx3 + kx4);
    u += (h / 6.0) * (ku1 + 2.0 * ku2 + 2.0 * ku3 + ku4);
    check_stage(x);

    times[k + 1] = (k + 1 == steps) ? t_end : h * static_cast<double>(k + 1);
    points.push_back(x);
    tangents.push_back(u);
  }
  return {DiscreteCurve(std::move(times), std::move(points)), std::move(tangents)};
}

DiscreteCurve integrate_geodesic_ivp(const SquareMat& a, const SquareMat& m0,
                                     const MetricParams& p, double t_end, std::size_t steps) {
  return integrate_geodesic_trajectory(a, m0, p, t_end, steps).curve;
}

std::vector<double> segment_lengths(const DiscreteCurve& c, const MetricParams& p,
                                    Execution exec) {
  const auto& x = c.points();
  const std::ptrdiff_t segments = static_cast<std::ptrdiff_t>(c.size()) - 1;
  std::vector<double> lengths(static_cast<std::size_t>(segments));
  // The chord X_{i+1} - X_i measured at the chord midpoint; the time step
  // cancels between velocity and quadrature weight.
  auto segment = [&](std::ptrdiff_t i) {
    const SquareMat chord = x[i + 1] - x[i];
    const SquareMat mid = 0.5 * (x[i] + x[i + 1]);
    return std::sqrt(std::max(0.0, metric_at(p, mid, chord, chord)));
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < segments; ++i) lengths[i] = segment(i);
  } else {
    for (std::ptrdiff_t i = 0; i < segments; ++i) lengths[i] = segment(i);
  }
  return lengths;
}

double curve_length(const DiscreteCurve& c, const MetricParams& p, Execution exec) {
  double total = 0.0;
  for (double l : segment_lengths(c, p, exec)) total += l;
  return total;
}

double curve_energy(const DiscreteCurve& c, const MetricParams& p, Execution exec) {
  const auto lengths = segment_lengths(c, p, exec);
  const auto& t = c.times();
  double total = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    total += lengths[i] * lengths[i] / (t[i + 1] - t[i]);
  }
  return total;
}

DiscreteCurve reparam_constant_speed(const DiscreteCurve& c, const MetricParams& p) {
  const auto lengths = segment_lengths(c, p, Execution::serial);
  const std::size_t m = lengths.size();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cumulative[i + 1] = cumulative[i] + lengths[i];
  const double total = cumulative.back();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "reparam_constant_speed: curve has zero length");
  }

  const auto& x = c.points();
  const double t0 = c.times().front();
  const double t1 = c.times().back();
  std::vector<double> times(m + 1);
  std::vector<SquareMat> points;
  points.reserve(m + 1);
  std::size_t seg = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(m);
    times[j] = t0 + (t1 - t0) * frac;
    if (j == 0) {
      points.push_back(x.front());
      continue;
    }
    if (j == m) {
      points.push_back(x.back());
      continue;
    }
    const double target = total * frac;
    while (seg + 1 < m && cumulative[seg + 1] < target) ++seg;
    const double len = lengths[seg];
    const double lambda = len > 0.0 ? std::clamp((target - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    points.push_back((1.0 - lambda) * x[seg] + lambda * x[seg + 1]);
  }
  times.back() = t1;
  return DiscreteCurve(std::move(times), std::move(points));
}

double geodesic_residual(const DiscreteCurve& c, const MetricParams& p) {
  if (c.size() < 3) {
    throw Error(ErrorKind::invalid_argument, "geodesic_residual: need at least three samples");
  }
  const auto& t = c.times();
  const double h = (t.back() - t.front()) / static_cast<double>(c.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (std::abs((t[i + 1] - t[i]) - h) > 1e-8 * h) {
      throw Error(ErrorKind::invalid_argument, "geodesic_residual: time grid is not uniform");
    }
  }
  const double coupling = geodesic_coupling(p);
  const auto& x = c.points();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const SquareMat x_inv = inverse(x[i]);
    // U = X^-1 X',  U' = X^-1 X'' - U^2.
    const SquareMat u = x_inv * ((x[i + 1] - x[i - 1]) / (2.0 * h));
    const SquareMat du = x_inv * ((x[i + 1] - 2.0 * x[i] + x[i - 1]) / (h * h)) - u * u;
    worst = std::max(worst, (du - tangent_rate(u, coupling)).frobenius_norm());
  }
  return worst;
}

ConservedQuantities conserved_quantities(const MetricParams& p, const SquareMat& u) {
  return {iso_norm(p, u), u.trace(), determinant(u), cofactor(u).trace()};
}

double gauss_pairing(const MetricParams& p, const SquareMat& a, const SquareMat& m,
                     const SquareMat& t) {
  require_same_dim(a, m, "gauss_pairing");
  require_same_dim(a, t, "gauss_pairing");
  require_positive_det(a, "gauss_pairing base");
  const GeodesicExponential phi(m, p.omega());
  const SquareMat endpoint = a * phi.value();
  return metric_at(p, endpoint, a * phi.derivative(m), a * phi.derivative(t));
}

}  // namespace glgeo
