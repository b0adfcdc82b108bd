#pragma once

#include <memory>
#include <string>

#include "parasol/spectral_operator.hpp"
#include "parasol/time_grid.hpp"
#include "parasol/types.hpp"

namespace parasol {

using OpPtr = std::shared_ptr<const SpectralOperator>;

// Time-sampled H-valued function stored in eigencoordinates:
// row k of values() is u(t_k), k = 0..n_steps.
class Trajectory {
 public:
  Trajectory(TimeGrid grid, OpPtr op);
  Trajectory(TimeGrid grid, OpPtr op, Mat values);

  static Trajectory zero(const TimeGrid& grid, const OpPtr& op) {
    return Trajectory(grid, op);
  }

  const TimeGrid& grid() const { return grid_; }
  const OpPtr& op() const { return op_; }
  const SpectralOperator& spectral() const { return *op_; }
  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  int rows() const { return static_cast<int>(values_.rows()); }

  Vec row(int k) const { return values_.row(k).transpose(); }
  void set_row(int k, const Vec& v) { values_.row(k) = v.transpose(); }

  // S^alpha applied at every time sample.
  Trajectory map_power(double alpha) const;

  // L^r((grid); D_{S,alpha}) norm by composite trapezoid; r = inf gives the
  // sup over grid points.
  double lr_norm(double r, double alpha) const;
  double l2_norm(double alpha) const { return lr_norm(2.0, alpha); }
  double sup_norm(double alpha = 0.0) const;
  double l1_norm() const { return lr_norm(1.0, 0.0); }

  // Mixed norm of the embedding scale: requires r*alpha == 2, or r = inf
  // with alpha = 0.
  double mixed_norm(double r, double alpha) const;

  // Time mean (quadrature average) of the eigencoordinates.
  Vec time_mean() const;
  Trajectory mean_free() const;

  // max(||u(t0)||, ||u(t1)||) / max_k ||u(t_k)||; small values mean the
  // window padding is adequate for the Fourier solvers.
  double edge_decay_ratio() const;

  void check_same_frame(const Trajectory& other, const char* where) const;

 private:
  TimeGrid grid_;
  OpPtr op_;
  Mat values_;
};

// CSV round trip: first column time, then interleaved real/imaginary parts
// of the eigencoordinates, 17 significant digits.
std::string trajectory_to_csv(const Trajectory& tr);
Trajectory trajectory_from_csv(const std::string& csv, const TimeGrid& grid,
                               const OpPtr& op);

}  // namespace parasol
