#pragma once

#include <functional>

#include "parasol/trajectory.hpp"

namespace parasol {

// Frequency-side samples of a window trajectory, scaled to approximate the
// continuous transform: hat u(tau_k) = dt * sum_j e^{-i tau_k t_j} u(t_j).
// With this scaling the discrete Plancherel identity
//   ||hat u||^2 = 2 pi ||u||^2
// holds exactly (both sides by the window quadrature).
class FrequencyTrajectory {
 public:
  FrequencyTrajectory(TimeGrid grid, OpPtr op, FrequencyGrid freqs, Mat modes);

  const TimeGrid& grid() const { return grid_; }
  const OpPtr& op() const { return op_; }
  const FrequencyGrid& frequencies() const { return freqs_; }
  const Mat& modes() const { return modes_; }
  Mat& modes() { return modes_; }
  int n_modes() const { return static_cast<int>(modes_.rows()); }

  Vec mode(int k) const { return modes_.row(k).transpose(); }

  // sqrt( (1/2pi) sum_k dtau * |tau_k|^{tau_power} * ||S^alpha hat u_k||^2 ).
  // skip_dc drops the tau = 0 mode (mandatory for negative tau powers).
  double weighted_l2(double alpha, double tau_power, bool skip_dc) const;
  double l2_norm(double alpha) const { return weighted_l2(alpha, 0.0, false); }

  double dc_mass() const;  // ||hat u(0)|| / period = norm of the time mean

 private:
  TimeGrid grid_;
  OpPtr op_;
  FrequencyGrid freqs_;
  Mat modes_;
};

FrequencyTrajectory time_fourier(const Trajectory& tr);
Trajectory inverse_time_fourier(const FrequencyTrajectory& ft);

// Fourier multiplier m(tau) applied on the window; kill_dc maps the tau = 0
// mode to zero.
Trajectory apply_time_multiplier(const Trajectory& tr,
                                 const std::function<Complex(double)>& m,
                                 bool kill_dc);

// |tau|^beta multiplier, beta in [0,1].  For beta > 0 the DC mode is
// annihilated; windows are mandatory (no bounded-interval meaning).
Trajectory fractional_time_derivative(const Trajectory& tr, double beta);

// i sign(tau) multiplier; DC mode mapped to zero.
Trajectory hilbert_transform(const Trajectory& tr);

// Norm of the solution scale mixing space and half-order time derivatives:
// ( ||u||^2_{L2(D_{S,1})} + ||D_t^{(1-alpha)/2} u||^2_{L2(D_{S,alpha})} )^{1/2}
double v_alpha_norm(const Trajectory& tr, double alpha);

// Dual-scale norm || |tau|^{-(1+alpha)/2} S^alpha hat f ||_{L2}; the DC mode
// is excluded (it carries infinite weight) and reported via dc_mass.
double w_alpha_norm(const FrequencyTrajectory& ft, double alpha,
                    double* dc_mass = nullptr);

struct HlsCheck {
  double lhs;       // ||u||_{L^r(D_{S,alpha})}, alpha = 2/r
  double rhs;       // ||D_t^{(1-alpha)/2} u||_{L2(D_{S,alpha})}
  double constant;  // documented admissible constant C(r)
  bool pass() const { return lhs <= constant * rhs + 1e-12; }
};

// Certified constant for ||u||_{L^r} <= C(r) ||D_t^{(1-alpha)/2}u||_{L2},
// r = 2/alpha.  C(2) = 1; for r > 2 a conservative closed-form bound from
// the kernel-splitting estimate of the fractional integral.
double hls_constant(double r);

HlsCheck hls_check(const Trajectory& tr, double r);

double plancherel_ratio(const Trajectory& tr);

}  // namespace parasol
