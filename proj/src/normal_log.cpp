#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "glgeo/algebra.hpp"
#include "glgeo/matrix_functions.hpp"

namespace glgeo {

namespace {

using Vec = std::vector<double>;

constexpr double kNormalityTol = 1e-9;
constexpr std::size_t kMaxBranches = 1000000;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec column(const SquareMat& m, std::size_t k) {
  Vec c(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) c[i] = m(i, k);
  return c;
}

Vec apply(const SquareMat& m, const Vec& x) {
  Vec y(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) y[i] += m(i, j) * x[j];
  return y;
}

// Orthonormal basis of span(vectors) minus its components along `against`,
// keeping the `keep` best-conditioned directions (pivoted Gram-Schmidt).
std::vector<Vec> deflate(std::vector<Vec> vectors, const std::vector<Vec>& against,
                         std::size_t keep) {
  for (auto& v : vectors) {
    for (const auto& a : against) {
      const double c = dot(a, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * a[i];
    }
  }
  std::vector<Vec> basis;
  while (basis.size() < keep && !vectors.empty()) {
    auto best = std::max_element(vectors.begin(), vectors.end(),
                                 [](const Vec& x, const Vec& y) { return norm(x) < norm(y); });
    Vec q = *best;
    vectors.erase(best);
    const double nq = norm(q);
    if (nq == 0.0) break;
    for (double& x : q) x /= nq;
    for (auto& v : vectors) {
      const double c = dot(q, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
    basis.push_back(std::move(q));
  }
  return basis;
}

// Groups sorted values into runs whose consecutive gaps are <= tol.
std::vector<std::pair<std::size_t, std::size_t>> clusters(const Vec& sorted, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t start = 0;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    if (k == sorted.size() || sorted[k] - sorted[k - 1] > tol) {
      runs.emplace_back(start, k);
      start = k;
    }
  }
  return runs;
}

// Eigen-decomposition of Y^T K Y for a symmetric K restricted to span(Y).
SymmetricEigen restricted_eigen(const SquareMat& k, const std::vector<Vec>& y) {
  const std::size_t m = y.size();
  SquareMat r(m);
  std::vector<Vec> ky;
  ky.reserve(m);
  for (const auto& v : y) ky.push_back(apply(k, v));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r(i, j) = dot(y[i], ky[j]);
  return symmetric_eigen(r);
}

std::vector<Vec> combine(const std::vector<Vec>& y, const SquareMat& coeffs, std::size_t from,
                         std::size_t to) {
  std::vector<Vec> out;
  for (std::size_t c = from; c < to; ++c) {
    Vec v(y.front().size(), 0.0);
    for (std::size_t j = 0; j < y.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += coeffs(j, c) * y[j][i];
    out.push_back(std::move(v));
  }
  return out;
}

struct Block {
  std::vector<Vec> vectors;  // 1 or 2 orthonormal columns
};

}  // namespace

NormalBlockForm normal_block_form(const SquareMat& a) {
  const std::size_t n = a.dim();
  const double det = determinant(a);
  if (!(det > 0.0)) {
    std::ostringstream msg;
    msg << "normal_log: det A = " << det << " is not positive";
    throw Error(ErrorKind::domain, msg.str());
  }
  if (!is_normal(a, kNormalityTol)) {
    throw Error(ErrorKind::domain, "normal_log: matrix is not normal");
  }

  const double scale = std::max(1.0, a.frobenius_norm());
  const double sym_tol = 1e-9 * scale;
  const double rot_tol = 1e-14 * scale * scale;

  const SquareMat s = sym_part(a);
  const SquareMat w = skew_part(a);
  // W^T W is symmetric positive semidefinite and commutes with sym A for
  // normal A; its eigenvalues are the squared rotation rates b^2.
  const SquareMat k = w.transposed() * w;

  const SymmetricEigen s_eig = symmetric_eigen(s);
  std::vector<Block> blocks;

  for (const auto& [lo, hi] : clusters(s_eig.values, sym_tol)) {
    std::vector<Vec> y;
    for (std::size_t c = lo; c < hi; ++c) y.push_back(column(s_eig.vectors, c));
    double real_part = 0.0;
    for (std::size_t c = lo; c < hi; ++c) real_part += s_eig.values[c];
    real_part /= static_cast<double>(hi - lo);

    const SymmetricEigen k_eig = restricted_eigen(k, y);
    std::size_t zero_end = 0;
    while (zero_end < k_eig.values.size() && k_eig.values[zero_end] <= rot_tol) ++zero_end;

    // Real eigenvalues: pair neighbours, largest residual rotation first so a
    // barely-rotating plane stays together.
    std::vector<Vec> real_vecs = combine(y, k_eig.vectors, 0, zero_end);
    std::reverse(real_vecs.begin(), real_vecs.end());
    if (real_part < 0.0 && real_vecs.size() % 2 != 0) {
      std::ostringstream msg;
      msg << "normal_log: negative eigenvalue " << real_part
          << " has odd multiplicity; no real normal logarithm";
      throw Error(ErrorKind::domain, msg.str());
    }
    std::size_t r = 0;
    for (; r + 1 < real_vecs.size(); r += 2) blocks.push_back({{real_vecs[r], real_vecs[r + 1]}});
    if (r < real_vecs.size()) blocks.push_back({{real_vecs[r]}});

    // Complex pairs s +- ib: split each b^2 eigenspace into W-invariant planes.
    Vec rates(k_eig.values.begin() + static_cast<std::ptrdiff_t>(zero_end), k_eig.values.end());
    for (const auto& [rlo, rhi] : clusters(rates, rot_tol + 1e-9 * scale * scale)) {
      std::vector<Vec> remaining = combine(y, k_eig.vectors, zero_end + rlo, zero_end + rhi);
      while (!remaining.empty()) {
        const Vec e = remaining.front();
        Vec f = apply(w, e);
        // Keep only the component inside the current eigenspace.
        Vec proj(f.size(), 0.0);
        for (const auto& v : remaining) {
          const double c = dot(v, f);
          for (std::size_t i = 0; i < proj.size(); ++i) proj[i] += c * v[i];
        }
        const double c_e = dot(e, proj);
        for (std::size_t i = 0; i < proj.size(); ++i) proj[i] -= c_e * e[i];
        const double np = norm(proj);
        if (np <= 1e-12 || remaining.size() < 2) {
          blocks.push_back({{e}});
          remaining = deflate(remaining, {e}, remaining.size() - 1);
          continue;
        }
        for (double& x : proj) x /= np;
        blocks.push_back({{e, proj}});
        remaining = deflate(remaining, {e, proj}, remaining.size() - 2);
      }
    }
  }

  NormalBlockForm form{SquareMat(n), {}, SquareMat(n)};
  std::size_t col = 0;
  for (const auto& b : blocks) {
    form.block_sizes.push_back(b.vectors.size());
    for (const auto& v : b.vectors) {
      for (std::size_t i = 0; i < n; ++i) form.basis(i, col) = v[i];
      ++col;
    }
  }
  if (col != n) {
    throw Error(ErrorKind::not_converged, "normal_log: failed to build a full normal basis");
  }
  form.blocks = form.basis.transposed() * a * form.basis;
  return form;
}

std::vector<LogBranch> normal_log(const SquareMat& a, int max_winding) {
  if (max_winding < 0) {
    throw Error(ErrorKind::invalid_argument, "normal_log: max_winding must be non-negative");
  }
  const NormalBlockForm form = normal_block_form(a);
  const std::size_t n = a.dim();

  struct PlaneLog {
    std::size_t offset;
    double angle;
  };
  std::vector<PlaneLog> planes;
  SquareMat base(n);  // log of the block matrix without rotation angles
  std::size_t offset = 0;
  for (std::size_t size : form.block_sizes) {
    const auto& b = form.blocks;
    if (size == 1) {
      const double lambda = b(offset, offset);
      if (!(lambda > 0.0)) {
        throw Error(ErrorKind::domain, "normal_log: unpaired non-positive eigenvalue");
      }
      base(offset, offset) = std::log(lambda);
    } else {
      const double re = 0.5 * (b(offset, offset) + b(offset + 1, offset + 1));
      const double im = 0.5 * (b(offset + 1, offset) - b(offset, offset + 1));
      const double log_r = std::log(std::hypot(re, im));
      base(offset, offset) = log_r;
      base(offset + 1, offset + 1) = log_r;
      planes.push_back({offset, std::atan2(im, re)});
    }
    offset += size;
  }

  const std::size_t choices = 2 * static_cast<std::size_t>(max_winding) + 1;
  std::size_t total = 1;
  for (std::size_t p = 0; p < planes.size(); ++p) {
    total *= choices;
    if (total > kMaxBranches) {
      throw Error(ErrorKind::invalid_argument, "normal_log: too many winding branches requested");
    }
  }

  const SquareMat qt = form.basis.transposed();
  std::vector<LogBranch> branches;
  branches.reserve(total);
  std::vector<int> index(planes.size(), -max_winding);
  for (std::size_t count = 0; count < total; ++count) {
    SquareMat log_blocks = base;
    for (std::size_t p = 0; p < planes.size(); ++p) {
      const double angle = planes[p].angle + 2.0 * std::numbers::pi * index[p];
      const std::size_t o = planes[p].offset;
      log_blocks(o + 1, o) = angle;
      log_blocks(o, o + 1) = -angle;
    }
    branches.push_back({form.basis * log_blocks * qt, index});
    for (std::size_t p = 0; p < planes.size(); ++p) {
      if (++index[p] <= max_winding) break;
      index[p] = -max_winding;
    }
  }

  std::vector<double> norms;
  norms.reserve(branches.size());
  for (const auto& b : branches) norms.push_back(b.value.frobenius_norm());
  std::vector<std::size_t> order(branches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (norms[i] != norms[j]) return norms[i] < norms[j];
    return branches[i].branch_index < branches[j].branch_index;
  });
  std::vector<LogBranch> sorted;
  sorted.reserve(branches.size());
  for (std::size_t i : order) sorted.push_back(std::move(branches[i]));
  return sorted;
}

}  // namespace glgeo
