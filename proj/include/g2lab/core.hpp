#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace g2lab {

template <typename T>
using SpinorMatrixT = Eigen::Matrix<std::complex<T>, 4, 4>;
using SpinorMatrix = SpinorMatrixT<double>;

template <typename T>
using FourVectorT = Eigen::Matrix<T, 4, 1>;
using FourVector = FourVectorT<double>;

using Spinor = Eigen::Matrix<std::complex<double>, 4, 1>;
using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// carries the achieved error estimate when a tolerance was not met
struct NumericError : std::runtime_error {
  double estimate = 0.0;
  NumericError(const std::string& what, double est = 0.0)
      : std::runtime_error(what), estimate(est) {}
};

struct ResourceGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline FourVector time_axis(double z) { return FourVector(z, 0.0, 0.0, 0.0); }

}  // namespace g2lab
