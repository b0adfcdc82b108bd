#pragma once

#include "parasol/trajectory.hpp"

namespace parasol {

// Residual of the energy identity for trajectories satisfying the discrete
// balance d/dt u = S f + S^beta g:
//   | ||u(tau)||^2 - ||u(sigma)||^2
//     - 2 Re int_sigma^tau <f, S u> + <g, S^beta u> dt |
// with composite trapezoid quadrature between the two grid indices.
// f or g may be null (absent part).
double integral_identity_residual(const Trajectory& u, const Trajectory* f,
                                  const Trajectory* g, double beta,
                                  int sigma_idx, int tau_idx);

// Polarized variant for a pair (u, v) with d/dt u = S f + S^beta g and
// d/dt v = S fv + S^beta gv:
//   | <u,v>(tau) - <u,v>(sigma)
//     - int <f,Sv> + <g,S^beta v> + <Su,fv> + <S^beta u, gv> dt |
double polarized_identity_residual(const Trajectory& u, const Trajectory* f,
                                   const Trajectory* g, const Trajectory& v,
                                   const Trajectory* fv, const Trajectory* gv,
                                   double beta, int sigma_idx, int tau_idx);

}  // namespace parasol
