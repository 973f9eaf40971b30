#pragma once

// Rotation-scaling (real polar) decomposition of dynamical matrices and the
// canonical block form shared by the commuting parts of a normal matrix.

#include <functional>
#include <vector>

#include "polardyn/block_schur.hpp"
#include "polardyn/lindblad.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

/// M = S R with R orthogonal and S symmetric positive semidefinite.
struct PolarParts {
  Mat r;
  Mat s;
  double commute_defect = 0.0;  ///< ||R S - S R||_F
  double orthogonality_defect = 0.0;  ///< ||R^T R - I||_F
  double reconstruction_defect = 0.0;  ///< ||S R - M||_F
  double det_r = 1.0;
  bool singular = false;  ///< sigma_min(M) <= 1e-12: R is not unique
};

PolarParts polar(const Mat& m);

/// One invariant subspace of the canonical form: rotation by `theta` and
/// isotropic scaling exp(-lambda). Lines (size 1) carry theta = 0 or pi.
struct CanonicalBlock {
  int size = 2;
  double theta = 0.0;
  double lambda = 0.0;
};

struct CanonicalForm {
  Mat k;  ///< orthogonal; K^T R K and K^T S K are block diagonal
  std::vector<CanonicalBlock> blocks;
  bool has_fixed_block = false;  ///< any 1x1 block present
  double rotation_residual = 0.0;  ///< ||K^T R K - blockdiag(rot(theta_k))||_F
  double scaling_residual = 0.0;   ///< ||K^T S K - blockdiag(exp(-lambda_k) I)||_F

  std::vector<int> block_sizes() const;
};

/// Block order: planes before lines; within each, descending lambda, ties by
/// ascending |theta|, then first occurrence.
///
/// Plane orientation is chosen so the (2,1) entry of each rotation block is
/// +sin(theta) with theta in [0, pi]: the sign of a rotation angle is not
/// invariant under orthogonal conjugation, so this is the reproducible choice.
/// Throws NormalityViolation when commute_defect >= tol, and InvalidArgument
/// when det R = -1 (no SO(n) canonical form).
CanonicalForm canonical_form(const PolarParts& parts, double tol);

enum class Isotropy { isotropic, anisotropic };
Isotropy classify_isotropy(const CanonicalForm& cf, double tol);

enum class Spheroid { prolate, oblate, ball };
inline constexpr double kSpheroidTol = 1e-9;

/// Qubit (Bloch dimension 3) shape of the image of the Bloch ball. Requires
/// exactly one plane block and one line block; throws InvalidArgument otherwise.
Spheroid spheroid_class(const CanonicalForm& cf, double tol = kSpheroidTol);

/// Per-block linear rates of a normal generator, lambda_k(t) = gamma_k t and
/// theta_k(t) = omega_k t, checked on sampled times.
struct RateFit {
  std::vector<double> gammas;
  std::vector<double> omegas;
  std::vector<int> block_sizes;
  Mat k;  ///< shared conjugation from the block Schur form of lambda
  double residual = 0.0;  ///< max_t max_k |lambda_k(t) - gamma_k t|, |theta_k(t) - omega_k t| mod 2pi
  /// lambda_k(t) and theta_k(t) per sampled time (row = time, column = block).
  Mat sampled_lambda;
  Mat sampled_theta;
};

/// Throws NormalityViolation for non-normal lambda, InvalidArgument for an
/// empty, non-positive or unsorted time list.
RateFit fit_rates(const SuperopMatrix& sup, const std::vector<double>& times, double tol);

/// lambda_k(t) and theta_k(t) in a fixed conjugation K.
struct BlockParameters {
  std::vector<double> lambdas;
  std::vector<double> thetas;
};
BlockParameters block_parameters(const PolarParts& parts, const Mat& k,
                                 const std::vector<int>& block_sizes);

/// W_t = R_t S_s = S_s R_t with ||R_t|| = 1 and ||S_s|| = ||W_t|| (spectral norms).
struct TwoParameterSplit {
  Mat rotation;  ///< R_t = exp(t A), A = (lambda - lambda^T)/2
  Mat scaling;   ///< S_s = exp(s B), B = (lambda + lambda^T)/2
  double t = 0.0;
  double s = 0.0;
  double rotation_norm = 0.0;
  double scaling_norm = 0.0;
  double matrix_norm = 0.0;
  double product_defect = 0.0;  ///< ||R S - M_t||_F
};

using Reparameterization = std::function<double(double)>;

/// Requires lambda normal and the generator unital (drift = 0). The scaling
/// marginal is indexed by s = s_of_t(t) (identity by default); it is always
/// the scaling part of M_t.
TwoParameterSplit two_parameter_split(const SuperopMatrix& sup, double t,
                                      const Reparameterization& s_of_t = {},
                                      double tol = 1e-10);

/// Marginal semigroups generated by the antisymmetric and symmetric parts of lambda.
Mat rotation_marginal(const SuperopMatrix& sup, double t);
Mat scaling_marginal(const SuperopMatrix& sup, double s);

/// ||x_k||^2 of the components of x in each block of K.
std::vector<double> subspace_weights(const Mat& k, const std::vector<int>& block_sizes, const Vec& x);

const char* to_string(Isotropy value);
const char* to_string(Spheroid value);

}  // namespace polardyn
