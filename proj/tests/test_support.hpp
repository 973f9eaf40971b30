#pragma once

// Seeded random ensembles and brute-force oracles shared by the test suites.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "polardyn/bloch.hpp"
#include "polardyn/lindblad.hpp"
#include "polardyn/types.hpp"

namespace polardyn::testing {

using Rng = std::mt19937_64;

inline double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMat random_complex(int rows, int cols, Rng& rng) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
  return m;
}

inline Mat random_real(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline CMat random_hermitian(int d, Rng& rng) {
  const CMat a = random_complex(d, d, rng);
  return 0.5 * (a + a.adjoint());
}

// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal removed.
inline CMat random_unitary(int d, Rng& rng) {
  Eigen::HouseholderQR<CMat> qr(random_complex(d, d, rng));
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

inline Mat random_orthogonal(int n, Rng& rng, bool proper = true) {
  Eigen::HouseholderQR<Mat> qr(random_real(n, n, rng));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (proper && q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

inline CMat random_pure_state(int d, Rng& rng) {
  CVec psi = random_complex(d, 1, rng).col(0);
  psi.normalize();
  return psi * psi.adjoint();
}

inline CMat random_density(int d, Rng& rng) {
  const CMat g = random_complex(d, d, rng);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Matrix with spectral norm uniformly in (0.2, 1).
inline Mat random_contraction(int n, Rng& rng) {
  Mat m = random_real(n, n, rng);
  Eigen::JacobiSVD<Mat> svd(m);
  return m * (uniform(rng, 0.2, 1.0) / svd.singularValues()(0));
}

/// 2x2 rotation by theta.
inline Mat rot2(double theta) {
  Mat r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// Unital generator whose Hamiltonian and jumps are all diagonal in one random
/// basis, so the superoperator is a Hadamard multiplier and hence normal. An
/// optional isotropic depolarizing term keeps it normal.
inline LindbladGenerator random_normal_unital_generator(int d, Rng& rng, int jumps = 2,
                                                        double depolarizing = 0.0) {
  const CMat u = random_unitary(d, rng);
  Vec h(d);
  for (int j = 0; j < d; ++j) h(j) = gauss(rng);
  std::vector<CMat> ops;
  for (int k = 0; k < jumps; ++k) {
    CVec diag(d);
    for (int j = 0; j < d; ++j) diag(j) = cplx(gauss(rng), gauss(rng)) * 0.6;
    ops.push_back(u * diag.asDiagonal() * u.adjoint());
  }
  if (depolarizing > 0) {
    const HermitianBasis basis(d);
    for (int a = 1; a <= basis.bloch_dim(); ++a)
      ops.push_back(std::sqrt(2.0 * depolarizing / d) * basis.element(a));
  }
  return LindbladGenerator(CMat(u * h.cast<cplx>().asDiagonal() * u.adjoint()), std::move(ops));
}

/// Unital but generally non-normal: Hermitian jumps plus a random Hamiltonian.
inline LindbladGenerator random_unital_generator(int d, Rng& rng, int jumps = 2) {
  std::vector<CMat> ops;
  for (int k = 0; k < jumps; ++k) ops.push_back(0.7 * random_hermitian(d, rng));
  return LindbladGenerator(random_hermitian(d, rng), std::move(ops));
}

/// Arbitrary generator with non-normal jumps (typically non-unital).
inline LindbladGenerator random_generator(int d, Rng& rng, int jumps = 2) {
  std::vector<CMat> ops;
  for (int k = 0; k < jumps; ++k) ops.push_back(0.5 * random_complex(d, d, rng));
  return LindbladGenerator(random_hermitian(d, rng), std::move(ops));
}

/// Column-stacking vec and its inverse.
inline CVec vec(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }
inline CMat unvec(const CVec& v, int d) { return Eigen::Map<const CMat>(v.data(), d, d); }

}  // namespace polardyn::testing
