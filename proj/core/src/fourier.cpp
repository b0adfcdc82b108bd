#include "parasol/fourier.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/FFT>

namespace parasol {

namespace {

void require_window(const TimeGrid& grid, const char* where) {
  if (grid.kind() != GridKind::full_line_window)
    throw contract_error(std::string(where) +
                         ": requires a full-line window grid");
}

}  // namespace

FrequencyTrajectory::FrequencyTrajectory(TimeGrid grid, OpPtr op,
                                         FrequencyGrid freqs, Mat modes)
    : grid_(grid), op_(std::move(op)), freqs_(std::move(freqs)),
      modes_(std::move(modes)) {
  if (modes_.rows() != grid_.n_steps() || modes_.cols() != op_->dim())
    throw std::invalid_argument("FrequencyTrajectory: mode matrix shape mismatch");
}

double FrequencyTrajectory::weighted_l2(double alpha, double tau_power,
                                        bool skip_dc) const {
  const RealVec p = (alpha == 0.0) ? RealVec::Ones(op_->dim())
                                   : op_->power_spectrum(alpha);
  double acc = 0.0;
  for (int k = 0; k < n_modes(); ++k) {
    const double tau = freqs_[k];
    if (tau == 0.0) {
      if (skip_dc || tau_power > 0.0) continue;  // weight is 0 or excluded
      if (tau_power < 0.0)
        throw std::invalid_argument(
            "FrequencyTrajectory::weighted_l2: negative tau power needs skip_dc");
    }
    const double tw = (tau_power == 0.0) ? 1.0 : std::pow(std::abs(tau), tau_power);
    double s = 0.0;
    for (Eigen::Index c = 0; c < modes_.cols(); ++c)
      s += std::norm(modes_(k, c)) * p[c] * p[c];
    acc += freqs_.dtau() * tw * s;
  }
  return std::sqrt(acc / (2.0 * kPi));
}

double FrequencyTrajectory::dc_mass() const {
  for (int k = 0; k < n_modes(); ++k)
    if (freqs_[k] == 0.0) return mode(k).norm() / grid_.period();
  return 0.0;
}

FrequencyTrajectory time_fourier(const Trajectory& tr) {
  require_window(tr.grid(), "time_fourier");
  const int n = tr.grid().n_steps();
  const double dt = tr.grid().dt();
  const double t0 = tr.grid().t0();
  FrequencyGrid freqs(tr.grid());

  Eigen::FFT<double> fft;
  Mat modes(n, tr.spectral().dim());
  Eigen::VectorXcd in(n), out(n);
  for (Eigen::Index c = 0; c < tr.values().cols(); ++c) {
    for (int j = 0; j < n; ++j) in[j] = tr.values()(j, c);
    fft.fwd(out, in);
    modes.col(c) = out;
  }
  // dt scaling and the phase anchoring the window at t0.
  for (int k = 0; k < n; ++k) {
    const Complex phase = std::polar(dt, -freqs[k] * t0);
    modes.row(k) *= phase;
  }
  return FrequencyTrajectory(tr.grid(), tr.op(), std::move(freqs), std::move(modes));
}

Trajectory inverse_time_fourier(const FrequencyTrajectory& ft) {
  const int n = ft.grid().n_steps();
  const double t0 = ft.grid().t0();
  const double period = ft.grid().period();

  Eigen::FFT<double> fft;
  Mat values(n + 1, ft.op()->dim());
  Eigen::VectorXcd in(n), out(n);
  for (Eigen::Index c = 0; c < ft.modes().cols(); ++c) {
    for (int k = 0; k < n; ++k)
      in[k] = ft.modes()(k, c) * std::polar(1.0, ft.frequencies()[k] * t0);
    fft.inv(out, in);  // (1/n) * sum with e^{+2 pi i jk/n}
    values.col(c).head(n) = out * (static_cast<double>(n) / period);
  }
  values.row(n) = values.row(0);  // periodic wrap
  return Trajectory(ft.grid(), ft.op(), std::move(values));
}

Trajectory apply_time_multiplier(const Trajectory& tr,
                                 const std::function<Complex(double)>& m,
                                 bool kill_dc) {
  FrequencyTrajectory ft = time_fourier(tr);
  for (int k = 0; k < ft.n_modes(); ++k) {
    const double tau = ft.frequencies()[k];
    const Complex factor = (tau == 0.0 && kill_dc) ? Complex(0, 0) : m(tau);
    ft.modes().row(k) *= factor;
  }
  return inverse_time_fourier(ft);
}

Trajectory fractional_time_derivative(const Trajectory& tr, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("fractional_time_derivative: beta outside [0,1]");
  require_window(tr.grid(), "fractional_time_derivative");
  if (beta == 0.0) return tr;
  return apply_time_multiplier(
      tr, [beta](double tau) { return Complex(std::pow(std::abs(tau), beta), 0); },
      /*kill_dc=*/true);
}

Trajectory hilbert_transform(const Trajectory& tr) {
  require_window(tr.grid(), "hilbert_transform");
  return apply_time_multiplier(
      tr,
      [](double tau) { return Complex(0.0, tau > 0 ? 1.0 : (tau < 0 ? -1.0 : 0.0)); },
      /*kill_dc=*/true);
}

double v_alpha_norm(const Trajectory& tr, double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0))
    throw std::invalid_argument("v_alpha_norm: alpha outside [-1,1]");
  require_window(tr.grid(), "v_alpha_norm");
  const FrequencyTrajectory ft = time_fourier(tr);
  const double energy = ft.weighted_l2(1.0, 0.0, false);
  // alpha = 1 keeps the DC mode (zeroth derivative is the identity).
  const double half =
      ft.weighted_l2(alpha, 1.0 - alpha, /*skip_dc=*/alpha < 1.0);
  return std::hypot(energy, half);
}

double w_alpha_norm(const FrequencyTrajectory& ft, double alpha, double* dc_mass) {
  if (!(alpha >= -1.0 && alpha <= 1.0))
    throw std::invalid_argument("w_alpha_norm: alpha outside [-1,1]");
  if (dc_mass) *dc_mass = ft.dc_mass();
  return ft.weighted_l2(alpha, -(1.0 + alpha), /*skip_dc=*/true);
}

double hls_constant(double r) {
  if (r < 2.0 || std::isinf(r))
    throw std::invalid_argument("hls_constant: r must lie in [2, inf)");
  if (r == 2.0) return 1.0;
  // Kernel splitting bound for the fractional integral of order
  // s = (r-2)/(2r): |u| <= c_s (A R^s Mg + B R^{s-1/2} ||g||_2), optimized
  // over R, with the L2 maximal-function bound folded in at C_M = 5.
  const double s = (r - 2.0) / (2.0 * r);
  const double c_s = 1.0 / (2.0 * std::tgamma(s) * std::cos(kPi * s / 2.0));
  const double A = std::pow(2.0, 1.0 - s) / (1.0 - std::pow(2.0, -s));
  const double B = std::sqrt(2.0 / (1.0 - 2.0 * s));
  const double K = std::pow(A, 1.0 - 2.0 * s) *
                   std::pow(B * (0.5 - s) / s, 2.0 * s) * 0.5 / (0.5 - s);
  const double max_l2 = 5.0;
  return c_s * K * std::pow(max_l2, 1.0 - 2.0 * s);
}

HlsCheck hls_check(const Trajectory& tr, double r) {
  if (r < 2.0 || std::isinf(r))
    throw std::invalid_argument("hls_check: r must lie in [2, inf)");
  require_window(tr.grid(), "hls_check");
  if (!tr.spectral().injective())
    throw std::domain_error("hls_check: S not injective");
  const double alpha = 2.0 / r;
  HlsCheck out;
  out.lhs = tr.mixed_norm(r, alpha);
  const FrequencyTrajectory ft = time_fourier(tr);
  out.rhs = ft.weighted_l2(alpha, 1.0 - alpha, /*skip_dc=*/alpha < 1.0);
  out.constant = hls_constant(r);
  return out;
}

double plancherel_ratio(const Trajectory& tr) {
  const FrequencyTrajectory ft = time_fourier(tr);
  const double freq = ft.l2_norm(0.0);
  const double time = tr.l2_norm(0.0);
  if (time == 0.0) return freq == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return (freq * freq) / (time * time);
}

}  // namespace parasol
