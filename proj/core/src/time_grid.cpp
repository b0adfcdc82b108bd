#include "parasol/time_grid.hpp"

namespace parasol {

TimeGrid::TimeGrid(double t0, double t1, int n_steps, GridKind kind)
    : t0_(t0), t1_(t1), n_steps_(n_steps), dt_((t1 - t0) / n_steps), kind_(kind) {
  if (!(t1 > t0)) throw std::invalid_argument("TimeGrid: need t1 > t0");
  if (n_steps < 1) throw std::invalid_argument("TimeGrid: need n_steps >= 1");
}

std::vector<double> TimeGrid::quad_weights() const {
  std::vector<double> w(static_cast<std::size_t>(n_steps_) + 1, dt_);
  if (kind_ == GridKind::full_line_window) {
    w.back() = 0.0;
  } else {
    w.front() = 0.5 * dt_;
    w.back() = 0.5 * dt_;
  }
  return w;
}

FrequencyGrid::FrequencyGrid(const TimeGrid& grid) {
  const int n = grid.n_steps();
  const double base = 2.0 * kPi / grid.period();
  dtau_ = base;
  freqs_.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int signed_k = (k <= n / 2) ? k : k - n;
    freqs_[static_cast<std::size_t>(k)] = base * signed_k;
  }
}

}  // namespace parasol
