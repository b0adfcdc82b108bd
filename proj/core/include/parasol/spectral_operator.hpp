#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "parasol/types.hpp"

namespace parasol {

// Finite-dimensional surrogate of a positive self-adjoint operator.
//
// The operator is held in diagonal form: an ascending vector of nonnegative
// eigenvalues plus the unitary basis mapping eigencoordinates to ambient
// coordinates.  All vectors handled by the library live in eigencoordinates,
// where the inner product of H is the standard one, so every operation below
// acts diagonally.  Eigenvalues below 1e-12 * max are clamped to zero at
// construction to remove sign noise in fractional powers.
class SpectralOperator {
 public:
  // Diagonal operator: ascending nonnegative eigenvalues, identity basis.
  explicit SpectralOperator(RealVec eigenvalues);

  // General operator given as a Hermitian matrix; eigendecomposed once with
  // a self-adjoint solver.
  static SpectralOperator from_hermitian(const Mat& matrix);

  Eigen::Index dim() const { return eigenvalues_.size(); }
  const RealVec& eigenvalues() const { return eigenvalues_; }
  double eigenvalue(Eigen::Index i) const { return eigenvalues_[i]; }
  const Mat& basis() const { return basis_; }
  bool injective() const { return injective_; }

  // f(S) v for a scalar Borel function sampled on the spectrum (real-valued
  // callables convert implicitly).  Throws std::domain_error naming the
  // offending eigenvalue when f is not finite there.
  Vec apply_function(const std::function<Complex(double)>& f, const Vec& v) const;

  // S^alpha v.  Negative powers require injectivity.
  Vec fractional_power(double alpha, const Vec& v) const;

  // ||S^alpha v||_H, the homogeneous norm of order alpha.
  double homogeneous_norm(double alpha, const Vec& v) const;

  // (lambda^2 + S^2)^{1/2}: same basis, shifted spectrum.
  SpectralOperator shift(double lambda) const;

  // Orthogonal decomposition v = v_ran + v_nul against nul(S).
  std::pair<Vec, Vec> kernel_split(const Vec& v) const;

  // Eigenvalues of S^alpha as a vector (for diagonal solvers).
  RealVec power_spectrum(double alpha) const;

  void check_vector(const Vec& v, const char* where) const;

 private:
  SpectralOperator(RealVec eigenvalues, Mat basis);
  void clamp_and_classify();

  RealVec eigenvalues_;
  Mat basis_;
  bool injective_ = false;
};

// Structured-text (JSON) round trip.  Accepts either
//   {"eigenvalues": [...], "basis": "identity"}
// or
//   {"matrix": [[re, im, re, im, ...], ...]}  (row-major, dense Hermitian)
SpectralOperator load_operator(const std::string& json_text);
std::string save_operator(const SpectralOperator& op);

}  // namespace parasol
