#include "polardyn/lindblad.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "polardyn/expm.hpp"

namespace polardyn {

LindbladGenerator::LindbladGenerator(CMat h, std::vector<CMat> jump_ops, GkslConvention conv)
    : dim(static_cast<int>(h.rows())),
      hamiltonian(std::move(h)),
      jumps(std::move(jump_ops)),
      convention(conv) {
  validate();
}

void LindbladGenerator::validate() const {
  if (dim < 1 || hamiltonian.rows() != dim || hamiltonian.cols() != dim)
    throw InvalidArgument("LindbladGenerator: Hamiltonian must be dim x dim");
  if (!hamiltonian.allFinite()) throw InvalidArgument("LindbladGenerator: non-finite Hamiltonian");
  if (!is_hermitian(hamiltonian)) throw InvalidArgument("LindbladGenerator: Hamiltonian is not Hermitian");
  CMat sum = CMat::Zero(dim, dim);
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    if (jumps[k].rows() != dim || jumps[k].cols() != dim)
      throw InvalidArgument("LindbladGenerator: jump " + std::to_string(k) + " has wrong shape");
    sum += jumps[k].adjoint() * jumps[k];
  }
  if (!sum.allFinite()) throw InvalidArgument("LindbladGenerator: sum of h^+ h overflows");
}

namespace {

void require_dim(const LindbladGenerator& gen, const CMat& rho) {
  if (rho.rows() != gen.dim || rho.cols() != gen.dim)
    throw InvalidArgument("apply_generator: state is " + std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()) + ", generator dimension is " +
                          std::to_string(gen.dim));
}

}  // namespace

CMat apply_generator(const LindbladGenerator& gen, const CMat& rho) {
  require_dim(gen, rho);
  const cplx minus_i(0.0, -1.0);
  CMat out = minus_i * (gen.hamiltonian * rho - rho * gen.hamiltonian);
  CMat dissipator = CMat::Zero(gen.dim, gen.dim);
  for (const CMat& h : gen.jumps) {
    const CMat hd = h.adjoint();
    const CMat anti = gen.convention == GkslConvention::standard ? CMat(hd * h) : CMat(h * hd);
    dissipator += h * rho * hd - 0.5 * (anti * rho + rho * anti);
  }
  out += 0.5 * dissipator;
  return out;
}

SuperopMatrix superop_matrix(const LindbladGenerator& gen, const HermitianBasis& basis) {
  if (basis.dim() != gen.dim) throw InvalidArgument("superop_matrix: basis dimension mismatch");
  const int n = basis.bloch_dim();
  SuperopMatrix sup;
  sup.dim = gen.dim;
  sup.lambda.resize(n, n);
  sup.ell.resize(n);

  std::vector<CMat> images;
  images.reserve(static_cast<std::size_t>(n));
  for (int beta = 1; beta <= n; ++beta) images.push_back(apply_generator(gen, basis.element(beta)));
  const CMat image_of_identity = apply_generator(gen, CMat::Identity(gen.dim, gen.dim));

  for (int alpha = 1; alpha <= n; ++alpha) {
    const CMat& f = basis.element(alpha);
    for (int beta = 1; beta <= n; ++beta)
      sup.lambda(alpha - 1, beta - 1) = (f * images[static_cast<std::size_t>(beta - 1)]).trace().real();
    sup.ell(alpha - 1) = (image_of_identity * f).trace().real();
  }
  return sup;
}

CMat full_superoperator(const LindbladGenerator& gen) {
  const int d = gen.dim;
  CMat super(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      CMat unit = CMat::Zero(d, d);
      unit(j, k) = 1.0;
      const CMat image = apply_generator(gen, unit);
      super.col(k * d + j) = Eigen::Map<const CVec>(image.data(), d * d);
    }
  }
  return super;
}

bool is_unital(const LindbladGenerator& gen, double tol) {
  return max_abs(apply_generator(gen, CMat::Identity(gen.dim, gen.dim))) < tol;
}

CMat choi_matrix(const LinearMap& map, int dim) {
  CMat choi = CMat::Zero(dim * dim, dim * dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      CMat unit = CMat::Zero(dim, dim);
      unit(j, k) = 1.0;
      choi.block(j * dim, k * dim, dim, dim) = map(unit);
    }
  }
  return choi;
}

CpCheck check_choi(const LinearMap& map, int dim, double tol) {
  const CMat choi = choi_matrix(map, dim);
  const CMat herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("check_choi: eigen solve failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig};
}

CpCheck is_completely_positive_semigroup(const LindbladGenerator& gen, double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument("is_completely_positive_semigroup: t must be >= 0");
  const int d = gen.dim;
  const CMat propagator = expm(CMat(t * full_superoperator(gen)));
  const LinearMap channel = [&](const CMat& x) -> CMat {
    const CVec image = propagator * Eigen::Map<const CVec>(x.data(), d * d);
    return Eigen::Map<const CMat>(image.data(), d, d);
  };
  return check_choi(channel, d, tol);
}

NormalityCheck is_normal_matrix(const Mat& a, double tol) {
  const double defect = (a * a.transpose() - a.transpose() * a).norm();
  return {defect < tol, defect};
}

NormalityCheck is_normal_superop(const SuperopMatrix& sup, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("is_normal_superop: tol must be positive");
  return is_normal_matrix(sup.lambda, tol);
}

int commutant_dimension(const std::vector<CMat>& ops, int dim, double tol) {
  const int n = dim * dim;
  if (ops.empty()) return n;
  // vec(A X - X A) = (I (x) A - A^T (x) I) vec(X) for column-stacked vec.
  CMat stacked(static_cast<Eigen::Index>(ops.size()) * n, n);
  const CMat id = CMat::Identity(dim, dim);
  for (std::size_t m = 0; m < ops.size(); ++m) {
    const CMat& a = ops[m];
    if (a.rows() != dim || a.cols() != dim)
      throw InvalidArgument("commutant_dimension: operator " + std::to_string(m) + " has wrong shape");
    CMat block = CMat::Zero(n, n);
    for (int p = 0; p < dim; ++p) {
      for (int q = 0; q < dim; ++q) {
        block.block(p * dim, q * dim, dim, dim) += id(p, q) * a;
        block.block(p * dim, q * dim, dim, dim) -= a(q, p) * id;
      }
    }
    stacked.block(static_cast<Eigen::Index>(m) * n, 0, n, n) = block;
  }
  Eigen::JacobiSVD<CMat> svd(stacked);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol) ++rank;
  return n - rank;
}

std::vector<CMat> spohn_operator_set(const LindbladGenerator& gen) {
  std::vector<CMat> ops;
  ops.push_back(gen.hamiltonian);
  for (const CMat& h : gen.jumps) {
    ops.push_back(h);
    ops.push_back(h.adjoint());
  }
  return ops;
}

Mat homogeneous_generator(const SuperopMatrix& sup) {
  const auto n = sup.lambda.rows();
  Mat g = Mat::Zero(n + 1, n + 1);
  g.block(1, 0, n, 1) = sup.drift();
  g.block(1, 1, n, n) = sup.lambda;
  return g;
}

int kernel_dimension(const Mat& a, double tol) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= tol) ++rank;
  return static_cast<int>(a.cols()) - rank;
}

}  // namespace polardyn
