#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace parasol {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;   // element of H in eigencoordinates
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// A caller broke an interface contract (wrong grid kind, mismatched
// dimensions, unsupported parameter combination).
class contract_error : public std::logic_error {
 public:
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

// A numerical procedure failed to reach its tolerance.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what + " (residual=" + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A problem specification (coefficients, weights, kernels) violates its
// stated bounds.
class spec_error : public std::invalid_argument {
 public:
  explicit spec_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace parasol
