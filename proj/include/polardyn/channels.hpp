#pragma once

// Qubit channel gallery, the NMR relaxation model, and conversion of Kraus
// channels to their affine action on Bloch vectors.
//
// Bloch coordinates are (x, y, z) in the orthonormal basis sigma_a / sqrt(2),
// so a Pauli-normalized radius r corresponds to ||x|| = r / sqrt(2).

#include <vector>

#include "polardyn/bloch.hpp"
#include "polardyn/evolution.hpp"
#include "polardyn/lindblad.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

namespace pauli {
CMat identity();
CMat x();
CMat y();
CMat z();
}  // namespace pauli

struct KrausChannel {
  int dim = 0;
  std::vector<CMat> kraus;

  KrausChannel() = default;
  KrausChannel(int d, std::vector<CMat> ops);

  CMat apply(const CMat& rho) const;
  /// ||sum K^+ K - I||_max
  double trace_preservation_defect() const;
  LinearMap as_map() const;
};

/// first after second: (first o second)(rho) = first(second(rho)).
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

/// x -> t x + c on Bloch vectors.
struct AffineMap {
  Mat t;
  Vec c;
};

/// c = x(Phi(I/d)), t(a, b) = Tr(f_a Phi(f_b)). Throws InvalidArgument when the
/// channel is not trace preserving within 1e-10.
AffineMap channel_to_affine(const KrausChannel& ch, const HermitianBasis& basis);

/// x* with t x* + c = x*; throws InvalidArgument when I - t is singular.
Vec affine_fixed_point(const AffineMap& map);

struct GalleryChannel {
  KrausChannel channel;
  AffineMap affine;  ///< closed form
  bool boundary = false;  ///< p is 0 or 1
};

/// (1-p) rho + p sigma_x rho sigma_x; affine diag(1, 1-2p, 1-2p).
GalleryChannel bit_flip(double p);
/// (1-p) rho + p sigma_z rho sigma_z; affine diag(1-2p, 1-2p, 1).
GalleryChannel phase_flip(double p);
/// (1-p) rho + (p/2) I; Kraus form sqrt(1-3p/4) I, sqrt(p/4) sigma_{x,y,z};
/// affine (1-p) I.
GalleryChannel depolarizing(double p);

struct AmplitudeDamping {
  KrausChannel channel;
  HomogeneousMatrix homogeneous;
};

/// Kraus pair [[0, sqrt p], [0, 0]] and diag(1, sqrt(1-p)).
AmplitudeDamping amplitude_damping(double p);

/// Rates in inverse time units.
struct NmrParams {
  double omega = 0.0;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  double gamma_z = 0.0;
};

/// Decay rates of the NMR Bloch equations produced by nmr_generator:
/// longitudinal r1 = (G+ + G-)/2 and transverse r2 = (G+ + G-)/4 + Gz
/// (the 1/2 in front of the dissipator sum halves the bare sums).
struct NmrRates {
  double longitudinal = 0.0;  ///< r1
  double transverse = 0.0;    ///< r2
};
NmrRates nmr_rates(const NmrParams& params);

/// Stationary z coordinate in the orthonormal basis:
/// (G+ - G-)/(G+ + G-) / sqrt(2), or 0 when both pumping rates vanish.
double nmr_equilibrium_z(const NmrParams& params);

/// H = -(omega/2) sigma_z, jumps sqrt(G+) |0><1|, sqrt(G-) |1><0|, sqrt(Gz) sigma_z,
/// standard anticommutator ordering. Throws InvalidArgument on negative rates.
LindbladGenerator nmr_generator(const NmrParams& params);

/// Closed-form 4x4 homogeneous matrix in (1, x, y, z) order: transverse plane
/// exp(-r2 t) rot(-omega t), z entry exp(-r1 t), translation z_eq (1 - exp(-r1 t)).
HomogeneousMatrix nmr_matrix(const NmrParams& params, double t);

/// Generator with lambda = -gamma I on all d^2-1 Bloch coordinates: jumps
/// sqrt(2 gamma / d) f_a for every traceless basis element.
LindbladGenerator isotropic_generator(int dim, double gamma);

/// Jumps sqrt(gamma) sigma_{x,y,z}; lambda = -2 gamma I.
LindbladGenerator pauli_depolarizing_generator(double gamma);

}  // namespace polardyn
