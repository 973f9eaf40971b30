#pragma once

// Real-vector (Bloch) representation of d x d Hermitian matrices in an
// orthonormal Hermitian basis {f_0 = I/sqrt(d), f_1, ..., f_{d^2-1}}.

#include <vector>

#include "polardyn/types.hpp"

namespace polardyn {

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kImagResidueTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;

/// Orthonormal basis of the d x d Hermitian matrices, generalized Gell-Mann
/// construction scaled so that Tr(f_a f_b) = delta_ab.
///
/// Element 0 is I/sqrt(d). Elements 1..d^2-1 follow in three families:
/// symmetric (E_jk + E_kj)/sqrt(2) for j < k, antisymmetric
/// (-i E_jk + i E_kj)/sqrt(2) for j < k, then the diagonal family
/// (sum_{j<l} E_jj - l E_ll)/sqrt(l(l+1)) for l = 1..d-1. For d = 2 this is
/// {I, sigma_x, sigma_y, sigma_z}/sqrt(2).
class HermitianBasis {
 public:
  explicit HermitianBasis(int dim);

  int dim() const noexcept { return dim_; }
  /// Number of traceless elements, d^2 - 1.
  int bloch_dim() const noexcept { return dim_ * dim_ - 1; }
  const CMat& element(int alpha) const { return elements_.at(static_cast<std::size_t>(alpha)); }
  const std::vector<CMat>& elements() const noexcept { return elements_; }

  /// Gram matrix G_ab = Tr(f_a^dagger f_b).
  CMat gram() const;

 private:
  int dim_;
  std::vector<CMat> elements_;
};

/// Throws InvalidArgument for d < 2.
HermitianBasis build_basis(int dim);

struct BlochVector {
  int dim = 0;
  Vec coords;

  double norm_squared() const { return coords.squaredNorm(); }
};

/// a = (trace/d) I + sum_alpha x_alpha f_alpha.
struct HermitianDecomp {
  double trace = 0.0;
  BlochVector bloch;
};

bool is_hermitian(const CMat& a, double tol = kHermiticityTol);

/// x_alpha = Tr(a f_alpha). Imaginary residues above 1e-10 are rejected.
HermitianDecomp vectorize(const CMat& a, const HermitianBasis& basis);

CMat reconstruct(const HermitianDecomp& decomp, const HermitianBasis& basis);

/// Trace-one state with the given Bloch coordinates.
CMat density_from_bloch(const BlochVector& x, const HermitianBasis& basis);

struct PhysicalityCheck {
  bool physical = false;
  double min_eigenvalue = 0.0;
};

/// Positivity of the reconstructed matrix (min eigenvalue >= -1e-10).
/// Requires trace = 1 within 1e-10.
PhysicalityCheck is_physical_state(const HermitianDecomp& decomp, const HermitianBasis& basis);

/// Squared radius of the ball of states, (d-1)/d.
inline double max_bloch_norm_squared(int dim) { return static_cast<double>(dim - 1) / dim; }

}  // namespace polardyn
