#pragma once

#include <functional>

#include "polardyn/bloch.hpp"
#include "polardyn/lindblad.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

/// Affine action x -> M x + c on Bloch vectors at time t.
struct DynamicalMatrix {
  int dim = 0;
  double t = 0.0;
  Mat m;
  Vec c;
};

/// d^2 x d^2 matrix acting on homogeneous coordinates (1, x):
/// first row (1, 0, ..., 0), first column tail c, lower-right block M.
/// Coordinates are ordered (1, x_1, ..., x_{d^2-1}); for a qubit (1, x, y, z).
struct HomogeneousMatrix {
  int dim = 0;
  Mat h;

  Mat linear_part() const { return h.bottomRightCorner(h.rows() - 1, h.cols() - 1); }
  Vec translation() const { return h.col(0).tail(h.rows() - 1); }
};

/// exp(A) via orthogonal block diagonalization when A is normal to within
/// `normal_tol` (relative to ||A||_F^2), Padé scaling-and-squaring otherwise.
Mat exp_real(const Mat& a, double normal_tol = 1e-10);

/// M = exp(t lambda), c = translation_vector(sup, t).
DynamicalMatrix dynamical_matrix(const SuperopMatrix& sup, double t);

/// c_t = (exp(t lambda) - I) lambda^{-1} drift when sigma_min(lambda) > 1e-10;
/// otherwise the series sum_{n>=0} t^{n+1}/(n+1)! lambda^n drift.
Vec translation_vector(const SuperopMatrix& sup, double t);

BlochVector evolve(const DynamicalMatrix& dm, const BlochVector& x0);

HomogeneousMatrix homogeneous_matrix(const DynamicalMatrix& dm);
HomogeneousMatrix homogeneous_matrix(const Mat& m, const Vec& c, int dim);

/// ||M_{t+s} - M_t M_s||_F + ||c_{t+s} - (M_t c_s + c_t)||.
double semigroup_defect(const SuperopMatrix& sup, double t, double s);

using DynamicalFamily = std::function<DynamicalMatrix(double)>;
double semigroup_defect(const DynamicalFamily& family, double t, double s);

}  // namespace polardyn
