#include "polardyn/evolution.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "polardyn/expm.hpp"

namespace polardyn {

namespace {

// exp of a real 2x2 block [[a, b], [c, d]].
Eigen::Matrix2d exp2x2(const Eigen::Matrix2d& block) {
  const double mean = 0.5 * block.trace();
  const Eigen::Matrix2d shifted = block - mean * Eigen::Matrix2d::Identity();
  const double disc = shifted(0, 0) * shifted(0, 0) + shifted(0, 1) * shifted(1, 0);
  double ch;
  double sh_over;
  if (disc > 0) {
    const double delta = std::sqrt(disc);
    ch = std::cosh(delta);
    sh_over = std::sinh(delta) / delta;
  } else if (disc < 0) {
    const double delta = std::sqrt(-disc);
    ch = std::cos(delta);
    sh_over = std::sin(delta) / delta;
  } else {
    ch = 1.0;
    sh_over = 1.0;
  }
  return std::exp(mean) * (ch * Eigen::Matrix2d::Identity() + sh_over * shifted);
}

void require_time(double t, const char* where) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidArgument(std::string(where) + ": time must be finite and >= 0");
}

}  // namespace

Mat exp_real(const Mat& a, double normal_tol) {
  const auto n = a.rows();
  if (n == 0) return Mat(0, 0);
  const double scale = std::max(1.0, a.squaredNorm());
  const double defect = (a * a.transpose() - a.transpose() * a).norm();
  if (defect > normal_tol * scale) return expm(a);

  // Normal: A = U T U^T with T block diagonal (1x1 and 2x2 blocks).
  Eigen::RealSchur<Mat> schur(a);
  if (schur.info() != Eigen::Success) return expm(a);
  const Mat& t = schur.matrixT();
  const Mat& u = schur.matrixU();
  Mat exp_t = Mat::Zero(n, n);
  const double sub_tol = 1e-14 * std::max(1.0, t.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(t(i + 1, i)) > sub_tol) {
      exp_t.block<2, 2>(i, i) = exp2x2(t.block<2, 2>(i, i));
      i += 2;
    } else {
      exp_t(i, i) = std::exp(t(i, i));
      i += 1;
    }
  }
  return u * exp_t * u.transpose();
}

Vec translation_vector(const SuperopMatrix& sup, double t) {
  require_time(t, "translation_vector");
  const auto n = sup.lambda.rows();
  const Vec drift = sup.drift();
  if (t == 0.0 || drift.norm() == 0.0) return Vec::Zero(n);

  Eigen::JacobiSVD<Mat> svd(sup.lambda);
  const double sigma_min = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
  if (sigma_min > 1e-10) {
    const Mat m = exp_real(t * sup.lambda);
    return (m - Mat::Identity(n, n)) * sup.lambda.colPivHouseholderQr().solve(drift);
  }

  // Series at a step small enough for fast convergence, then doubling:
  // c(2s) = M_s c(s) + c(s).
  const double lambda_norm = sup.lambda.norm();
  int doublings = 0;
  double step = t;
  while (step * lambda_norm > 0.5 && doublings < 60) {
    step *= 0.5;
    ++doublings;
  }
  Vec c = Vec::Zero(n);
  Vec power_term = step * drift;  // t^{k+1}/(k+1)! lambda^k drift at k = 0
  for (int k = 0; k < 200; ++k) {
    c += power_term;
    if (power_term.norm() < 1e-15 * std::max(1.0, c.norm())) break;
    power_term = sup.lambda * power_term * (step / (k + 2));
  }
  if (doublings > 0) {
    Mat m_step = exp_real(step * sup.lambda);
    for (int i = 0; i < doublings; ++i) {
      c = m_step * c + c;
      m_step = m_step * m_step;
    }
  }
  return c;
}

DynamicalMatrix dynamical_matrix(const SuperopMatrix& sup, double t) {
  require_time(t, "dynamical_matrix");
  DynamicalMatrix dm;
  dm.dim = sup.dim;
  dm.t = t;
  const auto n = sup.lambda.rows();
  dm.m = t == 0.0 ? Mat(Mat::Identity(n, n)) : exp_real(t * sup.lambda);
  dm.c = translation_vector(sup, t);
  return dm;
}

BlochVector evolve(const DynamicalMatrix& dm, const BlochVector& x0) {
  if (x0.coords.size() != dm.m.cols())
    throw InvalidArgument("evolve: Bloch vector has length " + std::to_string(x0.coords.size()) +
                          ", dynamical matrix is " + std::to_string(dm.m.rows()) + "x" +
                          std::to_string(dm.m.cols()));
  return BlochVector{dm.dim, dm.m * x0.coords + dm.c};
}

HomogeneousMatrix homogeneous_matrix(const Mat& m, const Vec& c, int dim) {
  const auto n = m.rows();
  if (m.cols() != n || c.size() != n) throw InvalidArgument("homogeneous_matrix: shape mismatch");
  HomogeneousMatrix hm;
  hm.dim = dim;
  hm.h = Mat::Zero(n + 1, n + 1);
  hm.h(0, 0) = 1.0;
  hm.h.block(1, 0, n, 1) = c;
  hm.h.block(1, 1, n, n) = m;
  return hm;
}

HomogeneousMatrix homogeneous_matrix(const DynamicalMatrix& dm) {
  return homogeneous_matrix(dm.m, dm.c, dm.dim);
}

double semigroup_defect(const DynamicalFamily& family, double t, double s) {
  require_time(t, "semigroup_defect");
  require_time(s, "semigroup_defect");
  const DynamicalMatrix a = family(t);
  const DynamicalMatrix b = family(s);
  const DynamicalMatrix ab = family(t + s);
  const double linear = (ab.m - a.m * b.m).norm();
  const double affine = (ab.c - (a.m * b.c + a.c)).norm();
  return linear + affine;
}

double semigroup_defect(const SuperopMatrix& sup, double t, double s) {
  return semigroup_defect([&sup](double time) { return dynamical_matrix(sup, time); }, t, s);
}

}  // namespace polardyn
