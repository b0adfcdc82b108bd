#pragma once

#include <cstdint>
#include <functional>

#include "parasol/report.hpp"
#include "parasol/source_spec.hpp"

namespace parasol {

// Time-sampled coercive sesquilinear forms
//   B_{t_k}(u, v) = < A(t_k) Seff u, Seff v >,   Seff = (lambda^2 + S^2)^{1/2},
// with uniform bounds  |B_t(u,v)| <= M ||Seff u|| ||Seff v||  and
// Re B_t(u,u) + kappa ||u||^2 >= nu ||Seff u||^2.  A is sampled at the left
// endpoint of each step; matrices are materialized at construction up to a
// size budget and otherwise generated on demand.
class FormFamily {
 public:
  FormFamily(OpPtr op, TimeGrid grid, std::function<Mat(double)> coefficient,
             double M, double nu, double kappa = 0.0, double lambda_shift = 0.0);

  // A(t) = identity: the autonomous heat family.
  static FormFamily identity(OpPtr op, const TimeGrid& grid);

  // Fixed coefficient matrix.
  static FormFamily autonomous(OpPtr op, const TimeGrid& grid, Mat A, double M,
                               double nu, double kappa = 0.0,
                               double lambda_shift = 0.0);

  // A(t) = (I + eps (cos(omega t) H1 + sin(omega t) H2)) with seeded unit-norm
  // Hermitian H1, H2; smooth in t, nu = 1 - eps, M = 1 + eps.
  static FormFamily rotation(OpPtr op, const TimeGrid& grid, double omega,
                             double eps, std::uint64_t seed);

  // Piecewise-constant random accretive family: fresh A_k per step with
  // guaranteed bounds (M, nu).
  static FormFamily random_accretive(OpPtr op, const TimeGrid& grid, double M,
                                     double nu, std::uint64_t seed);

  const OpPtr& op() const { return op_; }
  const TimeGrid& grid() const { return grid_; }
  double bound_M() const { return M_; }
  double bound_nu() const { return nu_; }
  double kappa() const { return kappa_; }
  double lambda_shift() const { return lambda_; }
  double exponential_shift() const { return omega_; }

  // Effective spectrum mu_i = sqrt(lambda^2 + lambda_i^2) of the shifted
  // operator defining the form domain norm.
  const RealVec& mu() const { return mu_; }
  bool effective_injective() const { return mu_.minCoeff() > 0.0; }

  Mat coefficient(int k) const;  // A(t_k)
  Mat generator(int k) const;    // L_k = diag(mu) A(t_k) diag(mu)

  // Single-time form evaluation <A(t_k) Seff u, Seff v>.
  Complex form_apply(int k, const Vec& u, const Vec& v) const;

  FormFamily adjoint() const;  // A -> A^*, same bounds and shifts
  FormFamily with_exponential_shift(double omega) const;
  FormFamily with_bounds(double M, double nu) const;
  FormFamily with_shifts(double kappa, double lambda_shift) const;
  FormFamily resampled(const TimeGrid& grid) const;

  // Samples the boundedness and coercivity invariants on seeded random
  // vectors at every step; slack_rel is relative to the tested magnitude.
  Report ellipticity_report(int n_samples, std::uint64_t seed,
                            double slack_rel = 1e-10) const;

 private:
  OpPtr op_;
  TimeGrid grid_;
  std::function<Mat(double)> gen_;
  double M_, nu_, kappa_, lambda_;
  double omega_ = 0.0;
  RealVec mu_;
  std::vector<Mat> cache_;  // materialized A(t_k), possibly empty
};

// Loader for the structured form document:
//   {"A": {"kind": "identity"|"rotation"|"random_accretive", "seed": ...,
//          "omega": ..., "eps": ...}
//    | [per-step matrices],
//    "M":, "nu":, "kappa":, "lambda":}
FormFamily load_form_family(const std::string& json_text, OpPtr op,
                            const TimeGrid& grid);

}  // namespace parasol
