#pragma once

// Matrix exponential by scaling and squaring with diagonal Padé approximants
// of degree 3, 5, 7, 9 or 13, selected from the 1-norm of the input with the
// standard backward-error thresholds.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "polardyn/types.hpp"

namespace polardyn {

namespace detail {

template <typename MatrixType>
double one_norm(const MatrixType& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename MatrixType, std::size_t N>
void pade_terms(const MatrixType& a, const std::array<double, N>& b, MatrixType& u, MatrixType& v) {
  // Low degrees: U = A * sum b_odd A^{2k}, V = sum b_even A^{2k}.
  const auto n = a.rows();
  const MatrixType id = MatrixType::Identity(n, n);
  const MatrixType a2 = a * a;
  MatrixType power = id;
  MatrixType odd = MatrixType::Zero(n, n);
  MatrixType even = MatrixType::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
  v = even;
}

template <typename MatrixType>
void pade13_terms(const MatrixType& a, MatrixType& u, MatrixType& v) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const MatrixType id = MatrixType::Identity(n, n);
  const MatrixType a2 = a * a;
  const MatrixType a4 = a2 * a2;
  const MatrixType a6 = a4 * a2;
  const MatrixType inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const MatrixType inner_v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  v = inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace detail

/// exp(A) for a square real or complex dense matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(
    const Eigen::MatrixBase<Derived>& input) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (input.rows() != input.cols()) throw InvalidArgument("expm: matrix must be square");
  const auto n = input.rows();
  if (n == 0) return MatrixType(0, 0);
  if (!input.allFinite()) throw InvalidArgument("expm: non-finite entries");

  MatrixType a = input;
  const double norm = detail::one_norm(a);
  MatrixType u;
  MatrixType v;
  int squarings = 0;

  if (norm <= 1.495585217958292e-2) {
    detail::pade_terms(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}, u, v);
  } else if (norm <= 2.539398330063230e-1) {
    detail::pade_terms(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}, u, v);
  } else if (norm <= 9.504178996162932e-1) {
    detail::pade_terms(a,
                       std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                                             1512.0, 56.0, 1.0},
                       u, v);
  } else if (norm <= 2.097847961257068) {
    detail::pade_terms(a,
                       std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                              302702400.0, 30270240.0, 2162160.0, 110880.0,
                                              3960.0, 90.0, 1.0},
                       u, v);
  } else {
    constexpr double theta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    a /= std::pow(2.0, squarings);
    detail::pade13_terms(a, u, v);
  }

  MatrixType result = (v - u).partialPivLu().solve(u + v);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace polardyn
