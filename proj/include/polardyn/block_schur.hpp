#pragma once

// Orthogonal block diagonalization of a real normal matrix.

#include <vector>

#include "polardyn/types.hpp"

namespace polardyn {

/// One invariant subspace of a normal matrix A: a 2-plane on which A acts as
/// modulus * rot(angle), or a line on which it acts as the scalar `real`.
struct SchurBlock {
  int offset = 0;  ///< first column of the block in K
  int size = 1;    ///< 1 or 2
  double real = 0.0;  ///< Re of the eigenvalue (the scalar for 1x1 blocks)
  double imag = 0.0;  ///< Im of the eigenvalue, >= 0 after orientation
};

/// A = K diag(B_1, ..., B_m) K^T with K orthogonal. 2x2 blocks are
/// [[real, -imag], [imag, real]] with imag >= 0 (the orientation of each plane is
/// chosen so); columns of equal real eigenvalues are paired into 2x2 blocks with
/// imag = 0, leftovers stay 1x1. Blocks are in Schur order; reorder with permute().
struct BlockSchur {
  Mat k;
  std::vector<SchurBlock> blocks;
  double off_block_residual = 0.0;  ///< ||offdiag-blocks(K^T A K)||_F

  /// Reorder blocks (and K's columns) to the given block order.
  void permute(const std::vector<std::size_t>& order);
};

/// Throws NumericalError if the real Schur iteration fails. `pair_tol` is the
/// relative tolerance for treating two real eigenvalues as equal.
BlockSchur block_schur_normal(const Mat& a, double pair_tol = 1e-9);

/// Entries of K^T A K outside the block pattern, Frobenius norm.
double off_block_norm(const Mat& kt_a_k, const std::vector<SchurBlock>& blocks);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace polardyn
