#pragma once

// Entropies in nats, closed-form linear-entropy laws, and the production /
// exchange split of an entropy change.

#include <vector>

#include "polardyn/bloch.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

enum class EntropyKind { linear, von_neumann };

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> values;
  EntropyKind kind = EntropyKind::linear;
};

/// ||x_k||^2 per canonical block; sums to ||x||^2.
struct SubspaceWeights {
  std::vector<double> weights;
};

/// 1 - Tr(rho^2). Throws InvalidArgument when |Tr rho - 1| > 1e-8.
double linear_entropy(const CMat& rho);

/// (d-1)/d - ||x||^2. Throws InvalidArgument outside the ball of radius^2 (d-1)/d.
double linear_entropy_from_bloch(const BlochVector& x);

/// (d-1)/d - sum_k exp(-2 gamma_k t) w_k.
double predicted_linear_entropy(const SubspaceWeights& weights, const std::vector<double>& gammas,
                                int dim, double t);

/// (d-1)/d (1 - exp(-2 gamma t)) + exp(-2 gamma t) S0.
EntropyTrace isotropic_entropy_curve(double gamma, int dim, double s0, const std::vector<double>& times);

/// -sum p ln p over eigenvalues; eigenvalues in [-1e-10, 0) are clamped to 0.
double von_neumann_entropy(const CMat& rho);

/// Qubit entropy from the Pauli radius r (eigenvalues (1 +- r)/2).
double qubit_entropy_from_radius(double r);

/// Qubit von Neumann entropy under isotropic scaling, radius r(t) = exp(-gamma t) r0.
EntropyTrace qubit_vn_isotropic_curve(double gamma, double r0, const std::vector<double>& times);

/// S(rho|sigma) = Tr(rho ln rho - rho ln sigma). Returns +infinity when the
/// support of rho is not contained in the support of sigma.
double relative_entropy(const CMat& rho, const CMat& sigma);

/// Tr(a ln sigma) for Hermitian a. Infinite (with the sign of the divergent
/// term) when a has weight on the kernel of sigma.
double trace_with_log(const CMat& a, const CMat& sigma);

/// Entropy change of rho_in -> rho_out against a stationary state sigma.
///
/// delta_e = -Tr((rho_out - rho_in) ln sigma) is the exchange term and
/// delta_p = delta_S - delta_e = S(rho_in|sigma) - S(rho_out|sigma) the
/// production, non-negative whenever sigma is a fixed point of the channel.
/// Infinite values are returned as +-infinity.
struct EntropySplit {
  double delta_s = 0.0;
  double delta_p = 0.0;
  double delta_e = 0.0;
};
EntropySplit entropy_production_exchange(const CMat& rho_in, const CMat& rho_out, const CMat& sigma);

}  // namespace polardyn
