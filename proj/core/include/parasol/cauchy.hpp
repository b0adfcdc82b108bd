#pragma once

#include "parasol/form_family.hpp"

namespace parasol {

enum class SteppingScheme { implicit_euler, crank_nicolson };

// One-step solution maps P_k of the homogeneous flow d/dt u + B u = 0 over
// [t_k, t_{k+1}], with coefficients sampled at the left endpoint.  A kappa
// allowance is absorbed by the substitution v = e^{-kappa' t} u with
// kappa' = kappa + 1; an exponential shift omega multiplies each map by the
// exact factor e^{-omega dt}.
std::vector<Mat> step_maps(const FormFamily& ff, const TimeGrid& grid,
                           SteppingScheme scheme = SteppingScheme::implicit_euler);

// Implicit-Euler (default) solve of
//   d/dt u + B u = S f2 + S^beta g + h + Dirac terms,   u(t0) = a,
// on a bounded or half-line grid.  Half-line grids require kappa = 0 and an
// injective effective operator.
Trajectory cauchy_step_solve(const FormFamily& ff, const Vec& a,
                             const SourceSpec& src, const TimeGrid& grid,
                             SteppingScheme scheme = SteppingScheme::implicit_euler);

// Homogeneous variant (no source).
Trajectory cauchy_step_solve(const FormFamily& ff, const Vec& a,
                             const TimeGrid& grid,
                             SteppingScheme scheme = SteppingScheme::implicit_euler);

// Residual of the discrete energy equality
//   ||u(tau)||^2 + 2 Re int B_t(u,u) = ||u(sigma)||^2 + 2 Re int <src, u-terms>
// maximized over all grid subintervals, plus a refinement row estimating the
// convergence order, and the measured stability constant of the solve.
Report energy_report(const FormFamily& ff, const Trajectory& u,
                     const SourceSpec& src);

// Maximal energy-equality residual over all subintervals (the raw number
// behind energy_report).
double energy_equality_residual(const FormFamily& ff, const Trajectory& u,
                                const SourceSpec& src);

// Verifies the exact per-step identity between the flows of B and B + omega:
// the shifted propagator equals e^{-omega(t-s)} times the plain one.
Report exponential_shift_check(const FormFamily& ff, double omega,
                               const TimeGrid& grid);

}  // namespace parasol
