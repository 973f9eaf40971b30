#include "polardyn/entropy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace polardyn {

namespace {

constexpr double kClampTol = 1e-10;
constexpr double kSupportTol = 1e-12;

void require_trace_one(const CMat& rho, const char* where) {
  if (rho.rows() != rho.cols()) throw InvalidArgument(std::string(where) + ": matrix must be square");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-8)
    throw InvalidArgument(std::string(where) + ": trace is " + std::to_string(tr) + ", expected 1");
}

Eigen::SelfAdjointEigenSolver<CMat> hermitian_eigen(const CMat& a, bool vectors) {
  const CMat herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(herm, vectors ? Eigen::ComputeEigenvectors
                                                           : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("entropy: eigen solve failed");
  return solver;
}

double entropy_of_spectrum(const Vec& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double value = p(i);
    if (value < -kClampTol)
      throw InvalidArgument("von_neumann_entropy: negative eigenvalue " + std::to_string(value));
    if (value > 0) s -= value * std::log(value);
  }
  return s;
}

}  // namespace

double linear_entropy(const CMat& rho) {
  require_trace_one(rho, "linear_entropy");
  return 1.0 - (rho * rho).trace().real();
}

double linear_entropy_from_bloch(const BlochVector& x) {
  const double bound = max_bloch_norm_squared(x.dim);
  const double n2 = x.norm_squared();
  if (n2 > bound + 1e-10)
    throw InvalidArgument("linear_entropy_from_bloch: ||x||^2 = " + std::to_string(n2) +
                          " exceeds " + std::to_string(bound));
  return bound - n2;
}

double predicted_linear_entropy(const SubspaceWeights& weights, const std::vector<double>& gammas,
                                int dim, double t) {
  if (weights.weights.size() != gammas.size())
    throw InvalidArgument("predicted_linear_entropy: " + std::to_string(weights.weights.size()) +
                          " weights but " + std::to_string(gammas.size()) + " rates");
  if (!(t >= 0.0)) throw InvalidArgument("predicted_linear_entropy: t must be >= 0");
  double value = max_bloch_norm_squared(dim);
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    if (gammas[k] < -1e-12) throw InvalidArgument("predicted_linear_entropy: negative rate");
    value -= std::exp(-2.0 * gammas[k] * t) * weights.weights[k];
  }
  return value;
}

EntropyTrace isotropic_entropy_curve(double gamma, int dim, double s0, const std::vector<double>& times) {
  const double bound = max_bloch_norm_squared(dim);
  if (!(gamma >= 0.0)) throw InvalidArgument("isotropic_entropy_curve: gamma must be >= 0");
  if (!(s0 >= 0.0 && s0 <= bound + 1e-12))
    throw InvalidArgument("isotropic_entropy_curve: S0 outside [0, (d-1)/d]");
  EntropyTrace trace{times, {}, EntropyKind::linear};
  trace.values.reserve(times.size());
  for (double t : times) {
    const double decay = std::exp(-2.0 * gamma * t);
    trace.values.push_back(bound * (1.0 - decay) + decay * s0);
  }
  return trace;
}

double von_neumann_entropy(const CMat& rho) {
  require_trace_one(rho, "von_neumann_entropy");
  return entropy_of_spectrum(hermitian_eigen(rho, false).eigenvalues());
}

double qubit_entropy_from_radius(double r) {
  auto term = [](double p) { return p > 0 ? -p * std::log(p) : 0.0; };
  return term(0.5 * (1.0 + r)) + term(0.5 * (1.0 - r));
}

EntropyTrace qubit_vn_isotropic_curve(double gamma, double r0, const std::vector<double>& times) {
  if (!(r0 >= 0.0 && r0 <= 1.0)) throw InvalidArgument("qubit_vn_isotropic_curve: r0 outside [0, 1]");
  EntropyTrace trace{times, {}, EntropyKind::von_neumann};
  trace.values.reserve(times.size());
  for (double t : times) trace.values.push_back(qubit_entropy_from_radius(std::exp(-gamma * t) * r0));
  return trace;
}

double trace_with_log(const CMat& a, const CMat& sigma) {
  if (a.rows() != sigma.rows() || a.cols() != sigma.cols())
    throw InvalidArgument("trace_with_log: dimension mismatch");
  const auto solver = hermitian_eigen(sigma, true);
  const Vec& q = solver.eigenvalues();
  const CMat& v = solver.eigenvectors();
  double finite = 0.0;
  double divergent = 0.0;  // sum of weights on the kernel; multiplies ln 0 = -inf
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    const double weight = (v.col(j).adjoint() * a * v.col(j))(0, 0).real();
    if (q(j) > kSupportTol) {
      finite += weight * std::log(q(j));
    } else if (std::abs(weight) > kSupportTol) {
      divergent += weight;
    }
  }
  if (divergent > 0) return -std::numeric_limits<double>::infinity();
  if (divergent < 0) return std::numeric_limits<double>::infinity();
  return finite;
}

double relative_entropy(const CMat& rho, const CMat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw InvalidArgument("relative_entropy: dimension mismatch");
  const auto rho_eig = hermitian_eigen(rho, false);
  double rho_log_rho = 0.0;
  for (Eigen::Index i = 0; i < rho_eig.eigenvalues().size(); ++i) {
    const double p = rho_eig.eigenvalues()(i);
    if (p > 0) rho_log_rho += p * std::log(p);
  }
  const double cross = trace_with_log(rho, sigma);
  if (std::isinf(cross)) return std::numeric_limits<double>::infinity();
  return rho_log_rho - cross;
}

EntropySplit entropy_production_exchange(const CMat& rho_in, const CMat& rho_out, const CMat& sigma) {
  if (rho_in.rows() != rho_out.rows() || rho_in.rows() != sigma.rows())
    throw InvalidArgument("entropy_production_exchange: dimension mismatch");
  EntropySplit split;
  split.delta_s = von_neumann_entropy(rho_out) - von_neumann_entropy(rho_in);
  split.delta_e = -trace_with_log(CMat(rho_out - rho_in), sigma);
  split.delta_p = split.delta_s - split.delta_e;
  return split;
}

}  // namespace polardyn
