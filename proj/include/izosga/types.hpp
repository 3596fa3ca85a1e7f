#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace izosga {

using Complex = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// Raised for malformed configuration files and invalid parameter sets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot produce a meaningful result
/// (non-finite input, unbracketed root, exhausted iteration budget).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace izosga
