#include "polardyn/bloch.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace polardyn {

HermitianBasis::HermitianBasis(int dim) : dim_(dim) {
  if (dim < 2) throw InvalidArgument("build_basis: dimension must be >= 2, got " + std::to_string(dim));
  const auto d = static_cast<Eigen::Index>(dim);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  elements_.reserve(static_cast<std::size_t>(dim * dim));

  elements_.push_back(CMat::Identity(d, d) / std::sqrt(static_cast<double>(dim)));

  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      CMat f = CMat::Zero(d, d);
      f(j, k) = inv_sqrt2;
      f(k, j) = inv_sqrt2;
      elements_.push_back(std::move(f));
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      CMat f = CMat::Zero(d, d);
      f(j, k) = cplx(0.0, -inv_sqrt2);
      f(k, j) = cplx(0.0, inv_sqrt2);
      elements_.push_back(std::move(f));
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    CMat f = CMat::Zero(d, d);
    for (Eigen::Index j = 0; j < l; ++j) f(j, j) = scale;
    f(l, l) = -static_cast<double>(l) * scale;
    elements_.push_back(std::move(f));
  }
}

CMat HermitianBasis::gram() const {
  const auto n = static_cast<Eigen::Index>(elements_.size());
  CMat g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      g(a, b) = (elements_[a].adjoint() * elements_[b]).trace();
  return g;
}

HermitianBasis build_basis(int dim) { return HermitianBasis(dim); }

bool is_hermitian(const CMat& a, double tol) {
  return a.rows() == a.cols() && max_abs(CMat(a - a.adjoint())) <= tol;
}

namespace {

void check_dims(const CMat& a, const HermitianBasis& basis, const char* where) {
  if (a.rows() != basis.dim() || a.cols() != basis.dim())
    throw InvalidArgument(std::string(where) + ": matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", basis dimension is " +
                          std::to_string(basis.dim()));
}

// Tr(a b) without forming the product.
cplx trace_product(const CMat& a, const CMat& b) { return (a.transpose().cwiseProduct(b)).sum(); }

}  // namespace

HermitianDecomp vectorize(const CMat& a, const HermitianBasis& basis) {
  check_dims(a, basis, "vectorize");
  if (!is_hermitian(a)) throw InvalidArgument("vectorize: input is not Hermitian within 1e-10");

  HermitianDecomp out;
  out.trace = a.trace().real();
  out.bloch.dim = basis.dim();
  out.bloch.coords.resize(basis.bloch_dim());
  for (int alpha = 1; alpha <= basis.bloch_dim(); ++alpha) {
    const cplx value = trace_product(a, basis.element(alpha));
    if (std::abs(value.imag()) > kImagResidueTol)
      throw InvalidArgument("vectorize: coordinate " + std::to_string(alpha) +
                            " has imaginary residue " + std::to_string(value.imag()));
    out.bloch.coords(alpha - 1) = value.real();
  }
  return out;
}

CMat reconstruct(const HermitianDecomp& decomp, const HermitianBasis& basis) {
  if (decomp.bloch.coords.size() != basis.bloch_dim() ||
      (decomp.bloch.dim != 0 && decomp.bloch.dim != basis.dim()))
    throw InvalidArgument("reconstruct: Bloch vector length " +
                          std::to_string(decomp.bloch.coords.size()) + " does not match basis of dimension " +
                          std::to_string(basis.dim()));
  const auto d = static_cast<Eigen::Index>(basis.dim());
  CMat a = CMat::Identity(d, d) * (decomp.trace / basis.dim());
  for (int alpha = 1; alpha <= basis.bloch_dim(); ++alpha)
    a += decomp.bloch.coords(alpha - 1) * basis.element(alpha);
  return a;
}

CMat density_from_bloch(const BlochVector& x, const HermitianBasis& basis) {
  return reconstruct(HermitianDecomp{1.0, x}, basis);
}

PhysicalityCheck is_physical_state(const HermitianDecomp& decomp, const HermitianBasis& basis) {
  if (std::abs(decomp.trace - 1.0) > 1e-10)
    throw InvalidArgument("is_physical_state: trace must be 1, got " + std::to_string(decomp.trace));
  const CMat rho = reconstruct(decomp, basis);
  Eigen::SelfAdjointEigenSolver<CMat> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("is_physical_state: eigen solve failed");
  const double min_eig = solver.eigenvalues().minCoeff();
  return {min_eig >= -kPositivityTol, min_eig};
}

}  // namespace polardyn
