#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace polardyn {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Bad caller input: wrong dimension, out-of-range parameter, malformed operator.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A decomposition that needs a normal (commuting polar parts) input got a non-normal one.
class NormalityViolation : public std::domain_error {
 public:
  NormalityViolation(const std::string& what, double defect)
      : std::domain_error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// An iterative routine (Schur, SVD, eigen solve) failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double max_abs(const CMat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
inline double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace polardyn
