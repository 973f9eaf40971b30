#include "polardyn/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/SVD>

#include "polardyn/evolution.hpp"

namespace polardyn {

PolarParts polar(const Mat& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("polar: matrix must be square");
  if (!m.allFinite()) throw InvalidArgument("polar: non-finite entries");
  const auto n = m.rows();
  PolarParts parts;
  if (n == 0) return parts;

  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat& u = svd.matrixU();
  const Mat& v = svd.matrixV();
  const Vec& sigma = svd.singularValues();

  parts.r = u * v.transpose();
  Mat s = u * sigma.asDiagonal() * u.transpose();
  parts.s = 0.5 * (s + s.transpose());
  parts.singular = sigma.minCoeff() <= 1e-12;
  parts.det_r = parts.r.determinant();
  parts.commute_defect = (parts.r * parts.s - parts.s * parts.r).norm();
  parts.orthogonality_defect = (parts.r.transpose() * parts.r - Mat::Identity(n, n)).norm();
  parts.reconstruction_defect = (parts.s * parts.r - m).norm();
  return parts;
}

std::vector<int> CanonicalForm::block_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(blocks.size());
  for (const CanonicalBlock& b : blocks) sizes.push_back(b.size);
  return sizes;
}

namespace {

constexpr double kTieTol = 1e-9;

// Stable insertion sort: planes first, then descending rate, then ascending |angle|.
template <typename Rate, typename Angle, typename Size>
std::vector<std::size_t> canonical_order(std::size_t count, Rate rate, Angle angle, Size size) {
  auto before = [&](std::size_t a, std::size_t b) {
    if (size(a) != size(b)) return size(a) > size(b);
    const double ra = rate(a);
    const double rb = rate(b);
    if (std::abs(ra - rb) > kTieTol * std::max(1.0, std::abs(ra))) return ra > rb;
    const double aa = std::abs(angle(a));
    const double ab = std::abs(angle(b));
    if (std::abs(aa - ab) > kTieTol) return aa < ab;
    return false;
  };
  std::vector<std::size_t> order;
  order.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto pos = order.end();
    while (pos != order.begin() && before(i, *(pos - 1))) --pos;
    order.insert(pos, i);
  }
  return order;
}

Mat rotation_blocks(const std::vector<CanonicalBlock>& blocks, Eigen::Index n) {
  Mat out = Mat::Zero(n, n);
  Eigen::Index offset = 0;
  for (const CanonicalBlock& b : blocks) {
    if (b.size == 2) {
      const double c = std::cos(b.theta);
      const double s = std::sin(b.theta);
      out.block<2, 2>(offset, offset) << c, -s, s, c;
    } else {
      out(offset, offset) = std::cos(b.theta);
    }
    offset += b.size;
  }
  return out;
}

Mat scaling_blocks(const std::vector<CanonicalBlock>& blocks, Eigen::Index n) {
  Vec diag(n);
  Eigen::Index offset = 0;
  for (const CanonicalBlock& b : blocks) {
    diag.segment(offset, b.size).setConstant(std::exp(-b.lambda));
    offset += b.size;
  }
  return diag.asDiagonal();
}

void extract_block(const Mat& kt_r_k, const Mat& kt_s_k, Eigen::Index offset, int size,
                   double& theta, double& lambda) {
  if (size == 2) {
    const Eigen::Matrix2d r = kt_r_k.block<2, 2>(offset, offset);
    const Eigen::Matrix2d s = kt_s_k.block<2, 2>(offset, offset);
    theta = std::atan2(0.5 * (r(1, 0) - r(0, 1)), 0.5 * (r(0, 0) + r(1, 1)));
    const double scale = 0.5 * s.trace();
    lambda = scale > 0 ? -std::log(scale) : std::numeric_limits<double>::infinity();
  } else {
    theta = kt_r_k(offset, offset) < 0 ? std::numbers::pi : 0.0;
    const double scale = kt_s_k(offset, offset);
    lambda = scale > 0 ? -std::log(scale) : std::numeric_limits<double>::infinity();
  }
}

}  // namespace

CanonicalForm canonical_form(const PolarParts& parts, double tol) {
  if (!(parts.commute_defect < tol))
    throw NormalityViolation("canonical_form: rotation and scaling parts do not commute (defect " +
                                 std::to_string(parts.commute_defect) + ")",
                             parts.commute_defect);
  if (parts.det_r < 0)
    throw InvalidArgument("canonical_form: orthogonal part has det -1 (orientation reversing)");
  const auto n = parts.r.rows();
  const Mat m = parts.s * parts.r;
  BlockSchur bs = block_schur_normal(m);

  const Mat kt_r_k = bs.k.transpose() * parts.r * bs.k;
  const Mat kt_s_k = bs.k.transpose() * parts.s * bs.k;
  std::vector<CanonicalBlock> raw;
  for (const SchurBlock& b : bs.blocks) {
    CanonicalBlock cb;
    cb.size = b.size;
    extract_block(kt_r_k, kt_s_k, b.offset, b.size, cb.theta, cb.lambda);
    raw.push_back(cb);
  }
  const auto order = canonical_order(
      raw.size(), [&](std::size_t i) { return raw[i].lambda; },
      [&](std::size_t i) { return raw[i].theta; }, [&](std::size_t i) { return raw[i].size; });
  bs.permute(order);

  CanonicalForm cf;
  cf.k = bs.k;
  for (std::size_t idx : order) {
    cf.blocks.push_back(raw[idx]);
    if (raw[idx].size == 1) cf.has_fixed_block = true;
  }
  cf.rotation_residual = (cf.k.transpose() * parts.r * cf.k - rotation_blocks(cf.blocks, n)).norm();
  const bool finite_scales = std::all_of(cf.blocks.begin(), cf.blocks.end(),
                                         [](const CanonicalBlock& b) { return std::isfinite(b.lambda); });
  cf.scaling_residual =
      finite_scales ? (cf.k.transpose() * parts.s * cf.k - scaling_blocks(cf.blocks, n)).norm() : 0.0;
  return cf;
}

Isotropy classify_isotropy(const CanonicalForm& cf, double tol) {
  if (cf.blocks.empty()) return Isotropy::isotropic;
  double lo = cf.blocks.front().lambda;
  double hi = lo;
  for (const CanonicalBlock& b : cf.blocks) {
    lo = std::min(lo, b.lambda);
    hi = std::max(hi, b.lambda);
  }
  return hi - lo < tol ? Isotropy::isotropic : Isotropy::anisotropic;
}

Spheroid spheroid_class(const CanonicalForm& cf, double tol) {
  if (cf.k.rows() != 3)
    throw InvalidArgument("spheroid_class: needs Bloch dimension 3, got " + std::to_string(cf.k.rows()));
  if (cf.blocks.size() != 2 || cf.blocks[0].size != 2 || cf.blocks[1].size != 1)
    throw InvalidArgument("spheroid_class: image is not a spheroid (no plane block with isotropic scaling)");
  const double plane = cf.blocks[0].lambda;
  const double axis = cf.blocks[1].lambda;
  if (plane > axis + tol) return Spheroid::prolate;
  if (plane < axis - tol) return Spheroid::oblate;
  return Spheroid::ball;
}

BlockParameters block_parameters(const PolarParts& parts, const Mat& k,
                                 const std::vector<int>& block_sizes) {
  const Mat kt_r_k = k.transpose() * parts.r * k;
  const Mat kt_s_k = k.transpose() * parts.s * k;
  BlockParameters out;
  Eigen::Index offset = 0;
  for (int size : block_sizes) {
    double theta = 0.0;
    double lambda = 0.0;
    extract_block(kt_r_k, kt_s_k, offset, size, theta, lambda);
    out.thetas.push_back(theta);
    out.lambdas.push_back(lambda);
    offset += size;
  }
  return out;
}

RateFit fit_rates(const SuperopMatrix& sup, const std::vector<double>& times, double tol) {
  if (times.empty()) throw InvalidArgument("fit_rates: time list is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw InvalidArgument("fit_rates: times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidArgument("fit_rates: times must be increasing");
  }
  const NormalityCheck normal = is_normal_superop(sup, tol);
  if (!normal.normal)
    throw NormalityViolation("fit_rates: generator matrix is not normal (defect " +
                                 std::to_string(normal.defect) + ")",
                             normal.defect);

  BlockSchur bs = block_schur_normal(sup.lambda);
  const auto order = canonical_order(
      bs.blocks.size(), [&](std::size_t i) { return -bs.blocks[i].real; },
      [&](std::size_t i) { return bs.blocks[i].imag; }, [&](std::size_t i) { return bs.blocks[i].size; });
  bs.permute(order);

  RateFit fit;
  fit.k = bs.k;
  for (const SchurBlock& b : bs.blocks) {
    fit.gammas.push_back(-b.real);
    fit.omegas.push_back(b.imag);
    fit.block_sizes.push_back(b.size);
  }

  const auto nblocks = static_cast<Eigen::Index>(fit.gammas.size());
  fit.sampled_lambda.resize(static_cast<Eigen::Index>(times.size()), nblocks);
  fit.sampled_theta.resize(static_cast<Eigen::Index>(times.size()), nblocks);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const PolarParts parts = polar(exp_real(t * sup.lambda));
    const BlockParameters params = block_parameters(parts, fit.k, fit.block_sizes);
    for (Eigen::Index b = 0; b < nblocks; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      fit.sampled_lambda(static_cast<Eigen::Index>(i), b) = params.lambdas[bi];
      fit.sampled_theta(static_cast<Eigen::Index>(i), b) = params.thetas[bi];
      fit.residual = std::max(fit.residual, std::abs(params.lambdas[bi] - fit.gammas[bi] * t));
      fit.residual =
          std::max(fit.residual, std::abs(wrap_angle(params.thetas[bi] - fit.omegas[bi] * t)));
    }
  }
  return fit;
}

namespace {

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

void require_normal_unital(const SuperopMatrix& sup, double tol, const char* where) {
  const double scale = std::max(1.0, sup.lambda.squaredNorm());
  const NormalityCheck normal = is_normal_matrix(sup.lambda, tol * scale);
  if (!normal.normal)
    throw NormalityViolation(std::string(where) + ": generator matrix is not normal", normal.defect);
  if (sup.drift().norm() >= tol)
    throw InvalidArgument(std::string(where) + ": generator is not unital");
}

}  // namespace

Mat rotation_marginal(const SuperopMatrix& sup, double t) {
  return exp_real(t * 0.5 * (sup.lambda - sup.lambda.transpose()));
}

Mat scaling_marginal(const SuperopMatrix& sup, double s) {
  return exp_real(s * 0.5 * (sup.lambda + sup.lambda.transpose()));
}

TwoParameterSplit two_parameter_split(const SuperopMatrix& sup, double t,
                                      const Reparameterization& s_of_t, double tol) {
  require_normal_unital(sup, tol, "two_parameter_split");
  if (!(t >= 0.0)) throw InvalidArgument("two_parameter_split: t must be >= 0");
  const Mat m = exp_real(t * sup.lambda);
  const PolarParts parts = polar(m);

  TwoParameterSplit split;
  split.rotation = parts.r;
  split.scaling = parts.s;
  split.t = t;
  split.s = s_of_t ? s_of_t(t) : t;
  split.rotation_norm = spectral_norm(parts.r);
  split.scaling_norm = spectral_norm(parts.s);
  split.matrix_norm = spectral_norm(m);
  split.product_defect = (parts.r * parts.s - m).norm();
  if (std::abs(split.rotation_norm - 1.0) > 1e-10 ||
      std::abs(split.scaling_norm - split.matrix_norm) > 1e-10)
    throw NumericalError("two_parameter_split: marginal norm conditions violated");
  return split;
}

std::vector<double> subspace_weights(const Mat& k, const std::vector<int>& block_sizes, const Vec& x) {
  if (x.size() != k.rows()) throw InvalidArgument("subspace_weights: dimension mismatch");
  const Vec y = k.transpose() * x;
  std::vector<double> weights;
  Eigen::Index offset = 0;
  for (int size : block_sizes) {
    weights.push_back(y.segment(offset, size).squaredNorm());
    offset += size;
  }
  return weights;
}

const char* to_string(Isotropy value) {
  return value == Isotropy::isotropic ? "isotropic" : "anisotropic";
}

const char* to_string(Spheroid value) {
  switch (value) {
    case Spheroid::prolate: return "prolate";
    case Spheroid::oblate: return "oblate";
    case Spheroid::ball: return "ball";
  }
  return "unknown";
}

}  // namespace polardyn
