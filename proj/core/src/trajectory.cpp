#include "parasol/trajectory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace parasol {

Trajectory::Trajectory(TimeGrid grid, OpPtr op)
    : grid_(grid), op_(std::move(op)),
      values_(Mat::Zero(grid.n_steps() + 1, op_->dim())) {}

Trajectory::Trajectory(TimeGrid grid, OpPtr op, Mat values)
    : grid_(grid), op_(std::move(op)), values_(std::move(values)) {
  if (values_.rows() != grid_.n_steps() + 1 || values_.cols() != op_->dim())
    throw std::invalid_argument("Trajectory: value matrix shape mismatch");
}

Trajectory Trajectory::map_power(double alpha) const {
  const RealVec p = op_->power_spectrum(alpha);
  Mat out = values_;
  for (Eigen::Index c = 0; c < out.cols(); ++c) out.col(c) *= p[c];
  return Trajectory(grid_, op_, std::move(out));
}

double Trajectory::lr_norm(double r, double alpha) const {
  if (std::isinf(r)) return sup_norm(alpha);
  if (r < 1.0) throw std::invalid_argument("lr_norm: r must be >= 1");
  const RealVec p = (alpha == 0.0) ? RealVec::Ones(op_->dim())
                                   : op_->power_spectrum(alpha);
  const auto w = grid_.quad_weights();
  double acc = 0.0;
  for (int k = 0; k < rows(); ++k) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < values_.cols(); ++c)
      s += std::norm(values_(k, c)) * p[c] * p[c];
    acc += w[static_cast<std::size_t>(k)] * std::pow(std::sqrt(s), r);
  }
  return std::pow(acc, 1.0 / r);
}

double Trajectory::sup_norm(double alpha) const {
  const RealVec p = (alpha == 0.0) ? RealVec::Ones(op_->dim())
                                   : op_->power_spectrum(alpha);
  double best = 0.0;
  for (int k = 0; k < rows(); ++k) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < values_.cols(); ++c)
      s += std::norm(values_(k, c)) * p[c] * p[c];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double Trajectory::mixed_norm(double r, double alpha) const {
  const bool sup_case = std::isinf(r) && alpha == 0.0;
  if (!sup_case && std::abs(r * alpha - 2.0) > 1e-12)
    throw std::invalid_argument("mixed_norm: need r*alpha == 2 (or r=inf, alpha=0)");
  return lr_norm(r, alpha);
}

Vec Trajectory::time_mean() const {
  const auto w = grid_.quad_weights();
  Vec mean = Vec::Zero(op_->dim());
  double total = 0.0;
  for (int k = 0; k < rows(); ++k) {
    mean += w[static_cast<std::size_t>(k)] * row(k);
    total += w[static_cast<std::size_t>(k)];
  }
  return mean / total;
}

Trajectory Trajectory::mean_free() const {
  const Vec m = time_mean();
  Mat out = values_;
  out.rowwise() -= m.transpose();
  return Trajectory(grid_, op_, std::move(out));
}

double Trajectory::edge_decay_ratio() const {
  double peak = 0.0;
  for (int k = 0; k < rows(); ++k) peak = std::max(peak, row(k).norm());
  if (peak == 0.0) return 0.0;
  return std::max(row(0).norm(), row(rows() - 1).norm()) / peak;
}

void Trajectory::check_same_frame(const Trajectory& other, const char* where) const {
  if (!(grid_ == other.grid_))
    throw contract_error(std::string(where) + ": trajectories on different grids");
  if (op_->dim() != other.op_->dim())
    throw contract_error(std::string(where) + ": trajectories over different operators");
}

std::string trajectory_to_csv(const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < tr.rows(); ++k) {
    os << tr.grid().point(k);
    for (Eigen::Index c = 0; c < tr.values().cols(); ++c)
      os << ',' << tr.values()(k, c).real() << ',' << tr.values()(k, c).imag();
    os << '\n';
  }
  return os.str();
}

Trajectory trajectory_from_csv(const std::string& csv, const TimeGrid& grid,
                               const OpPtr& op) {
  Mat values = Mat::Zero(grid.n_steps() + 1, op->dim());
  std::istringstream is(csv);
  std::string line;
  int k = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (k > grid.n_steps())
      throw std::invalid_argument("trajectory_from_csv: too many rows");
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');  // time column, trusted from grid
    for (Eigen::Index c = 0; c < op->dim(); ++c) {
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument("trajectory_from_csv: short row");
      const double re = std::stod(cell);
      if (!std::getline(ls, cell, ','))
        throw std::invalid_argument("trajectory_from_csv: short row");
      const double im = std::stod(cell);
      values(k, c) = Complex(re, im);
    }
    ++k;
  }
  if (k != grid.n_steps() + 1)
    throw std::invalid_argument("trajectory_from_csv: row count mismatch");
  return Trajectory(grid, op, std::move(values));
}

}  // namespace parasol
