#pragma once

#include <functional>
#include <vector>

#include "polardyn/bloch.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

/// Operator ordering in the dissipator's anticommutator.
///
/// `standard`: D_h(rho) = h rho h^+ - 1/2 {h^+ h, rho}  (trace preserving for every h)
/// `reversed`: D_h(rho) = h rho h^+ - 1/2 {h h^+, rho}  (trace preserving only when
///             sum_k (h_k h_k^+ - h_k^+ h_k) = 0, e.g. normal or adjoint-closed jump sets)
enum class GkslConvention { standard, reversed };

/// L(rho) = -i[H, rho] + 1/2 sum_k D_{h_k}(rho).
///
/// The overall 1/2 in front of the dissipator sum is part of the model: a jump
/// sqrt(g) sigma_z therefore dephases coherences at rate g, not 2g.
struct LindbladGenerator {
  int dim = 0;
  CMat hamiltonian;
  std::vector<CMat> jumps;
  GkslConvention convention = GkslConvention::standard;

  LindbladGenerator() = default;
  LindbladGenerator(CMat h, std::vector<CMat> jump_ops,
                    GkslConvention conv = GkslConvention::standard);

  /// Throws InvalidArgument on shape mismatch, non-Hermitian H or non-finite entries.
  void validate() const;
};

/// Real matrix of L restricted to the traceless subspace plus the image of the identity.
struct SuperopMatrix {
  int dim = 0;
  Mat lambda;  ///< lambda(a, b) = Tr(f_a L(f_b)), a, b >= 1
  Vec ell;     ///< ell(a) = Tr(L(I) f_a)

  /// Constant term of the Bloch equation dx/dt = lambda x + drift for trace-one
  /// states: drift = x(L(I/d)) = ell / d.
  Vec drift() const { return ell / static_cast<double>(dim); }
};

CMat apply_generator(const LindbladGenerator& gen, const CMat& rho);

SuperopMatrix superop_matrix(const LindbladGenerator& gen, const HermitianBasis& basis);

/// d^2 x d^2 complex matrix of L acting on column-stacked vec(rho).
CMat full_superoperator(const LindbladGenerator& gen);

/// ||L(I)||_max < 1e-10.
bool is_unital(const LindbladGenerator& gen, double tol = 1e-10);

using LinearMap = std::function<CMat(const CMat&)>;

/// Choi matrix sum_{jk} E_jk (x) Phi(E_jk) (unnormalized; the identity channel gives
/// d times the maximally entangled projector).
CMat choi_matrix(const LinearMap& map, int dim);

struct CpCheck {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
};

inline constexpr double kChoiTol = 1e-8;

CpCheck check_choi(const LinearMap& map, int dim, double tol = kChoiTol);

/// Choi positivity of exp(tL). Throws InvalidArgument for t < 0.
CpCheck is_completely_positive_semigroup(const LindbladGenerator& gen, double t,
                                         double tol = kChoiTol);

struct NormalityCheck {
  bool normal = false;
  double defect = 0.0;  ///< ||A A^T - A^T A||_F
};

NormalityCheck is_normal_matrix(const Mat& a, double tol);
NormalityCheck is_normal_superop(const SuperopMatrix& sup, double tol);

/// dim {X in M_d(C) : [X, A] = 0 for all A in ops}. Singular values below
/// `tol` count as zero.
int commutant_dimension(const std::vector<CMat>& ops, int dim, double tol = 1e-10);

/// H, the jumps and their adjoints: the operator set whose trivial commutant
/// gives a unique stationary state.
std::vector<CMat> spohn_operator_set(const LindbladGenerator& gen);

/// d^2 x d^2 real generator of the affine Bloch flow in homogeneous coordinates
/// (1, x): first row zero, first column tail = drift, lower-right block = lambda.
Mat homogeneous_generator(const SuperopMatrix& sup);

/// Numerical nullity of a real matrix (singular values below tol).
int kernel_dimension(const Mat& a, double tol = 1e-10);

}  // namespace polardyn
