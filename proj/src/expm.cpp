#include <array>
#include <cmath>

#include "glgeo/matrix_functions.hpp"

namespace glgeo {

namespace {

// Largest 1-norms for which the degree-m Pade approximant meets double
// precision without scaling (Higham 2005, Table 2.3).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// exp(A) ~ (V - U)^-1 (V + U).
SquareMat pade_quotient(const SquareMat& u, const SquareMat& v) {
  const LuDecomposition lu(v - u);
  return lu.solve(v + u);
}

template <std::size_t N>
SquareMat pade_low_degree(const SquareMat& a, const std::array<double, N>& b) {
  // Degrees 3..9: accumulate even powers A^0, A^2, A^4, ...
  const std::size_t n = a.dim();
  const SquareMat a2 = a * a;
  SquareMat power = SquareMat::identity(n);
  SquareMat odd(n);
  SquareMat even(n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    even += b[k] * power;
    odd += b[k + 1] * power;
    power = power * a2;
  }
  return pade_quotient(a * odd, even);
}

SquareMat pade13(const SquareMat& a) {
  const auto& b = kPade13;
  const std::size_t n = a.dim();
  const SquareMat id = SquareMat::identity(n);
  const SquareMat a2 = a * a;
  const SquareMat a4 = a2 * a2;
  const SquareMat a6 = a4 * a2;
  const SquareMat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                            b[3] * a2 + b[1] * id;
  const SquareMat u = a * u_inner;
  const SquareMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                      b[2] * a2 + b[0] * id;
  return pade_quotient(u, v);
}

}  // namespace

SquareMat mat_exp(const SquareMat& m) {
  const std::size_t n = m.dim();
  if (n == 1) {
    SquareMat e(1);
    e(0, 0) = std::exp(m(0, 0));
    return e;
  }
  const double norm = m.norm1();
  if (norm == 0.0) return SquareMat::identity(n);
  if (norm <= kTheta3) return pade_low_degree(m, kPade3);
  if (norm <= kTheta5) return pade_low_degree(m, kPade5);
  if (norm <= kTheta7) return pade_low_degree(m, kPade7);
  if (norm <= kTheta9) return pade_low_degree(m, kPade9);

  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  SquareMat result = pade13(std::ldexp(1.0, -squarings) * m);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

SquareMat dexp(const SquareMat& m, const SquareMat& t) {
  require_same_dim(m, t, "dexp");
  const std::size_t n = m.dim();
  SquareMat block(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      block(i, j) = m(i, j);
      block(n + i, n + j) = m(i, j);
      block(i, n + j) = t(i, j);
    }
  }
  const SquareMat e = mat_exp(block);
  SquareMat d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = e(i, n + j);
  return d;
}

}  // namespace glgeo
