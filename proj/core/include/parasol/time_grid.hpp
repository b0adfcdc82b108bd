#pragma once

#include <vector>

#include "parasol/types.hpp"

namespace parasol {

// full_line_window: one period of a periodic extension used by the Fourier
// solvers; data is expected to decay at the window edges (see
// edge_decay_ratio).  half_line / bounded: truncated [0,T] style grids for
// the time steppers.
enum class GridKind { full_line_window, half_line, bounded };

class TimeGrid {
 public:
  TimeGrid(double t0, double t1, int n_steps, GridKind kind);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int n_steps() const { return n_steps_; }
  double dt() const { return dt_; }
  GridKind kind() const { return kind_; }
  double point(int k) const { return t0_ + k * dt_; }
  double period() const { return t1_ - t0_; }

  TimeGrid refined() const { return TimeGrid(t0_, t1_, 2 * n_steps_, kind_); }

  bool operator==(const TimeGrid& o) const {
    return t0_ == o.t0_ && t1_ == o.t1_ && n_steps_ == o.n_steps_ && kind_ == o.kind_;
  }

  // Quadrature weights over the n_steps+1 grid rows.  Composite trapezoid;
  // on a periodic window the endpoints are identified, so the rule reduces
  // to full weight on rows 0..n-1 and none on the wrap-around row.
  std::vector<double> quad_weights() const;

 private:
  double t0_, t1_;
  int n_steps_;
  double dt_;
  GridKind kind_;
};

// Discrete Fourier frequencies of the window (natural FFT order, tau = 0
// first, symmetric about 0 up to the Nyquist convention).
class FrequencyGrid {
 public:
  explicit FrequencyGrid(const TimeGrid& grid);
  const std::vector<double>& frequencies() const { return freqs_; }
  double operator[](int k) const { return freqs_[static_cast<std::size_t>(k)]; }
  int size() const { return static_cast<int>(freqs_.size()); }
  double dtau() const { return dtau_; }

 private:
  std::vector<double> freqs_;
  double dtau_;
};

}  // namespace parasol
