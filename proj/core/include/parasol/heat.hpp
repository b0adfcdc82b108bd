#pragma once

#include <optional>

#include "parasol/report.hpp"
#include "parasol/source_spec.hpp"

namespace parasol {

// phi(z) = (1 - e^{-z})/z with phi(0) = 1, the exponential-integrator weight.
double expm1_weight(double z);
// psi(z) = (z - 1 + e^{-z})/z^2 with psi(0) = 1/2, its companion for the
// linear part of the source over a step.
double expm1_slope_weight(double z);

// Exact per-step exponential integration of the diagonal heat flow
// d/dt u + S^2 u = src, with the source replaced by its piecewise-linear
// interpolant over each step and Dirac masses placed atomically at the
// first grid point >= their time.  Works for injective and non-injective S.
Trajectory duhamel_solve(const OpPtr& op, const SourceSpec& src,
                         const TimeGrid& grid);

struct FourierDiagnostics {
  double source_edge_ratio = 0.0;    // window decay of the source data
  double solution_edge_ratio = 0.0;  // window decay of the solution
  bool edge_decay_ok = true;         // both below 1e-8 of the peak
};

// Frequency-side resolvent division u_hat(tau) = src_hat(tau)/(i tau + S^2)
// on a full-line window; requires injective S (the tau = 0 mode divides by
// S^2).  Dirac terms enter through their closed-form transforms.
Trajectory fourier_heat_solve(const OpPtr& op, const SourceSpec& src,
                              const TimeGrid& grid,
                              FourierDiagnostics* diag = nullptr);

struct HeatConstants {
  std::optional<double> C;  // only defined for alpha in [-1, 0)
  double Cprime = 0.0;
};

// C(alpha)^2 = (1/2pi) * integral over (0,inf) of t^{-2 alpha}/(1+t^4) dt/t
// by adaptive quadrature (relative tolerance 1e-8), and
// C'(alpha) = sup_{t>0} t^{1-alpha} (1+t^4)^{-1/2} in closed form via the
// maximizer t^4 = (1-alpha)/(1+alpha).
HeatConstants heat_constants(double alpha);

// Per-eigenmode adaptive quadrature of the semigroup energy integral
// int_0^inf || S e^{-s S^2} e_i ||^2 ds; each entry equals 1/2 for a
// positive eigenvalue and 0 for a kernel mode.
RealVec semigroup_energy_integrals(const SpectralOperator& op,
                                   double rel_tol = 1e-10);

// Checks every a-priori bound applicable to the given source decomposition
// against a fresh per-part solve, plus the quadratic equality and (for pure
// L^1 data) the combined sup bound.  Slack is 1e-8 plus an O(dt) allowance.
Report apriori_report(const OpPtr& op, const SourceSpec& src,
                      const Trajectory& u);

}  // namespace parasol
