#pragma once

#include <vector>

#include "glgeo/matrix.hpp"

namespace glgeo {

/// exp(M) by scaling and squaring with diagonal Pade approximants (degrees
/// 3, 5, 7, 9, 13 selected from the 1-norm of M).
SquareMat mat_exp(const SquareMat& m);

/// Frechet derivative of exp at M in direction T, read off the upper-right
/// block of exp([[M, T], [0, M]]).
SquareMat dexp(const SquareMat& m, const SquareMat& t);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  SquareMat vectors;           // column k belongs to values[k]
};

/// Cyclic Jacobi eigensolver. Only the symmetric part of `s` is read.
SymmetricEigen symmetric_eigen(const SquareMat& s);

/// Principal logarithm of a symmetric positive definite matrix.
SquareMat log_psym(const SquareMat& p);

/// Symmetric positive definite square root of a symmetric positive definite matrix.
SquareMat sqrt_psym(const SquareMat& p);

struct PolarDecomposition {
  SquareMat rotation;  // R in SO(n)
  SquareMat stretch;   // U = sqrt(F^T F)
};

/// F = R U for det F > 0.
PolarDecomposition polar_decompose(const SquareMat& f);

/// True iff |M M^T - M^T M|_F <= tol |M|_F^2.
bool is_normal(const SquareMat& m, double tol);

struct LogBranch {
  SquareMat value;
  /// Winding shift k per two-dimensional block of the real normal form.
  std::vector<int> branch_index;
};

/// Orthogonal block-diagonalization A = Q B Q^T of a real normal matrix with
/// positive determinant. Blocks are 1x1 (positive eigenvalue) or 2x2
/// (rotation-scaling pair, including paired repeated real eigenvalues).
struct NormalBlockForm {
  SquareMat basis;                       // Q, orthogonal
  std::vector<std::size_t> block_sizes;  // 1 or 2, in column order of Q
  SquareMat blocks;                      // Q^T A Q
};

NormalBlockForm normal_block_form(const SquareMat& a);

/// Real normal logarithms of a normal A with det A > 0, one per combination of
/// winding shifts |k| <= max_winding on the 2x2 blocks, sorted by Frobenius
/// norm ascending.
std::vector<LogBranch> normal_log(const SquareMat& a, int max_winding = 2);

}  // namespace glgeo
