#include "polardyn/channels.hpp"

#include <cmath>
#include <string>

namespace polardyn {

namespace pauli {
CMat identity() { return CMat::Identity(2, 2); }
CMat x() {
  CMat m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
CMat y() {
  CMat m(2, 2);
  m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return m;
}
CMat z() {
  CMat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

KrausChannel::KrausChannel(int d, std::vector<CMat> ops) : dim(d), kraus(std::move(ops)) {
  for (const CMat& k : kraus)
    if (k.rows() != dim || k.cols() != dim) throw InvalidArgument("KrausChannel: operator has wrong shape");
}

CMat KrausChannel::apply(const CMat& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) throw InvalidArgument("KrausChannel::apply: dimension mismatch");
  CMat out = CMat::Zero(dim, dim);
  for (const CMat& k : kraus) out += k * rho * k.adjoint();
  return out;
}

double KrausChannel::trace_preservation_defect() const {
  CMat sum = CMat::Zero(dim, dim);
  for (const CMat& k : kraus) sum += k.adjoint() * k;
  return max_abs(CMat(sum - CMat::Identity(dim, dim)));
}

LinearMap KrausChannel::as_map() const {
  return [ch = *this](const CMat& x) { return ch.apply(x); };
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim != second.dim) throw InvalidArgument("compose: dimension mismatch");
  std::vector<CMat> ops;
  for (const CMat& a : first.kraus)
    for (const CMat& b : second.kraus) ops.push_back(a * b);
  return KrausChannel(first.dim, std::move(ops));
}

AffineMap channel_to_affine(const KrausChannel& ch, const HermitianBasis& basis) {
  if (basis.dim() != ch.dim) throw InvalidArgument("channel_to_affine: basis dimension mismatch");
  const double defect = ch.trace_preservation_defect();
  if (defect > 1e-10)
    throw InvalidArgument("channel_to_affine: channel is not trace preserving (defect " +
                          std::to_string(defect) + ")");
  const int n = basis.bloch_dim();
  AffineMap map;
  map.t.resize(n, n);
  const CMat center = ch.apply(CMat::Identity(ch.dim, ch.dim) / static_cast<double>(ch.dim));
  map.c = vectorize(center, basis).bloch.coords;
  for (int beta = 1; beta <= n; ++beta) {
    const CMat image = ch.apply(basis.element(beta));
    for (int alpha = 1; alpha <= n; ++alpha)
      map.t(alpha - 1, beta - 1) = (basis.element(alpha) * image).trace().real();
  }
  return map;
}

Vec affine_fixed_point(const AffineMap& map) {
  const auto n = map.t.rows();
  const Mat shifted = Mat::Identity(n, n) - map.t;
  Eigen::FullPivLU<Mat> lu(shifted);
  if (!lu.isInvertible()) throw InvalidArgument("affine_fixed_point: fixed point is not unique");
  return lu.solve(map.c);
}

namespace {

bool check_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(std::string(where) + ": p must lie in [0, 1]");
  return p == 0.0 || p == 1.0;
}

GalleryChannel pauli_mixture(double p, const CMat& sigma, Vec diag, const char* where) {
  GalleryChannel g;
  g.boundary = check_probability(p, where);
  g.channel = KrausChannel(2, {std::sqrt(1.0 - p) * pauli::identity(), std::sqrt(p) * sigma});
  g.affine.t = diag.asDiagonal();
  g.affine.c = Vec::Zero(3);
  return g;
}

}  // namespace

GalleryChannel bit_flip(double p) {
  return pauli_mixture(p, pauli::x(), Eigen::Vector3d(1.0, 1.0 - 2.0 * p, 1.0 - 2.0 * p), "bit_flip");
}

GalleryChannel phase_flip(double p) {
  return pauli_mixture(p, pauli::z(), Eigen::Vector3d(1.0 - 2.0 * p, 1.0 - 2.0 * p, 1.0), "phase_flip");
}

GalleryChannel depolarizing(double p) {
  GalleryChannel g;
  g.boundary = check_probability(p, "depolarizing");
  const double side = std::sqrt(p / 4.0);
  g.channel = KrausChannel(2, {std::sqrt(1.0 - 0.75 * p) * pauli::identity(), side * pauli::x(),
                               side * pauli::y(), side * pauli::z()});
  g.affine.t = (1.0 - p) * Mat::Identity(3, 3);
  g.affine.c = Vec::Zero(3);
  return g;
}

AmplitudeDamping amplitude_damping(double p) {
  check_probability(p, "amplitude_damping");
  CMat decay = CMat::Zero(2, 2);
  decay(0, 1) = std::sqrt(p);
  CMat keep = CMat::Zero(2, 2);
  keep(0, 0) = 1.0;
  keep(1, 1) = std::sqrt(1.0 - p);
  AmplitudeDamping ad;
  ad.channel = KrausChannel(2, {decay, keep});
  const AffineMap affine = channel_to_affine(ad.channel, build_basis(2));
  ad.homogeneous = homogeneous_matrix(affine.t, affine.c, 2);
  return ad;
}

NmrRates nmr_rates(const NmrParams& params) {
  const double pumping = params.gamma_plus + params.gamma_minus;
  return {0.5 * pumping, 0.25 * pumping + params.gamma_z};
}

double nmr_equilibrium_z(const NmrParams& params) {
  const double pumping = params.gamma_plus + params.gamma_minus;
  if (pumping == 0.0) return 0.0;
  return (params.gamma_plus - params.gamma_minus) / pumping / std::sqrt(2.0);
}

namespace {

void check_nmr(const NmrParams& params) {
  if (!(params.gamma_plus >= 0.0 && params.gamma_minus >= 0.0 && params.gamma_z >= 0.0))
    throw InvalidArgument("NMR rates must be non-negative");
  if (!std::isfinite(params.omega)) throw InvalidArgument("NMR omega must be finite");
}

}  // namespace

LindbladGenerator nmr_generator(const NmrParams& params) {
  check_nmr(params);
  CMat raising = CMat::Zero(2, 2);
  raising(0, 1) = std::sqrt(params.gamma_plus);
  CMat lowering = CMat::Zero(2, 2);
  lowering(1, 0) = std::sqrt(params.gamma_minus);
  return LindbladGenerator(-0.5 * params.omega * pauli::z(),
                           {raising, lowering, std::sqrt(params.gamma_z) * pauli::z()},
                           GkslConvention::standard);
}

HomogeneousMatrix nmr_matrix(const NmrParams& params, double t) {
  check_nmr(params);
  if (!(t >= 0.0)) throw InvalidArgument("nmr_matrix: t must be >= 0");
  const NmrRates rates = nmr_rates(params);
  const double transverse = std::exp(-rates.transverse * t);
  const double longitudinal = std::exp(-rates.longitudinal * t);
  const double c = std::cos(params.omega * t);
  const double s = std::sin(params.omega * t);
  Mat m(3, 3);
  m << transverse * c, transverse * s, 0.0,
      -transverse * s, transverse * c, 0.0,
      0.0, 0.0, longitudinal;
  Vec shift = Vec::Zero(3);
  shift(2) = nmr_equilibrium_z(params) * -std::expm1(-rates.longitudinal * t);
  return homogeneous_matrix(m, shift, 2);
}

LindbladGenerator isotropic_generator(int dim, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("isotropic_generator: gamma must be >= 0");
  const HermitianBasis basis(dim);
  const double amplitude = std::sqrt(2.0 * gamma / dim);
  std::vector<CMat> jumps;
  for (int alpha = 1; alpha <= basis.bloch_dim(); ++alpha) jumps.push_back(amplitude * basis.element(alpha));
  return LindbladGenerator(CMat::Zero(dim, dim), std::move(jumps), GkslConvention::standard);
}

LindbladGenerator pauli_depolarizing_generator(double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("pauli_depolarizing_generator: gamma must be >= 0");
  const double a = std::sqrt(gamma);
  return LindbladGenerator(CMat::Zero(2, 2), {a * pauli::x(), a * pauli::y(), a * pauli::z()},
                           GkslConvention::standard);
}

}  // namespace polardyn
