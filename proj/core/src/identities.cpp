#include "parasol/identities.hpp"

#include <cmath>

namespace parasol {

namespace {

void check_range(const Trajectory& u, int sigma_idx, int tau_idx) {
  if (sigma_idx < 0 || tau_idx > u.grid().n_steps() || sigma_idx >= tau_idx)
    throw std::invalid_argument("integral identity: bad index range");
}

// Trapezoid weights on the subinterval [t_sigma, t_tau].
double weight(int k, int sigma_idx, int tau_idx, double dt) {
  return (k == sigma_idx || k == tau_idx) ? 0.5 * dt : dt;
}

}  // namespace

double integral_identity_residual(const Trajectory& u, const Trajectory* f,
                                  const Trajectory* g, double beta,
                                  int sigma_idx, int tau_idx) {
  check_range(u, sigma_idx, tau_idx);
  if (f) u.check_same_frame(*f, "integral_identity_residual");
  if (g) u.check_same_frame(*g, "integral_identity_residual");

  const double dt = u.grid().dt();
  double integral = 0.0;
  for (int k = sigma_idx; k <= tau_idx; ++k) {
    const Vec uk = u.row(k);
    Complex s(0, 0);
    if (f) s += u.spectral().fractional_power(1.0, uk).dot(f->row(k));
    if (g) s += u.spectral().fractional_power(beta, uk).dot(g->row(k));
    integral += weight(k, sigma_idx, tau_idx, dt) * s.real();
  }
  const double jump = u.row(tau_idx).squaredNorm() - u.row(sigma_idx).squaredNorm();
  return std::abs(jump - 2.0 * integral);
}

double polarized_identity_residual(const Trajectory& u, const Trajectory* f,
                                   const Trajectory* g, const Trajectory& v,
                                   const Trajectory* fv, const Trajectory* gv,
                                   double beta, int sigma_idx, int tau_idx) {
  check_range(u, sigma_idx, tau_idx);
  u.check_same_frame(v, "polarized_identity_residual");

  const double dt = u.grid().dt();
  Complex integral(0, 0);
  for (int k = sigma_idx; k <= tau_idx; ++k) {
    const Vec uk = u.row(k);
    const Vec vk = v.row(k);
    Complex s(0, 0);
    // <x, y> is conjugate-linear in the second slot throughout.
    if (f) s += v.spectral().fractional_power(1.0, vk).dot(f->row(k));
    if (g) s += v.spectral().fractional_power(beta, vk).dot(g->row(k));
    if (fv) s += fv->row(k).dot(u.spectral().fractional_power(1.0, uk));
    if (gv) s += gv->row(k).dot(u.spectral().fractional_power(beta, uk));
    integral += weight(k, sigma_idx, tau_idx, dt) * s;
  }
  const Complex jump = v.row(tau_idx).dot(u.row(tau_idx)) -
                       v.row(sigma_idx).dot(u.row(sigma_idx));
  return std::abs(jump - integral);
}

}  // namespace parasol
