#include "parasol/propagator.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace parasol {

namespace {

std::vector<int> strided_points(int n, int max_points) {
  std::vector<int> idx;
  const int stride = std::max(1, (n + max_points - 1) / max_points);
  for (int i = 0; i <= n; i += stride) idx.push_back(i);
  if (idx.back() != n) idx.push_back(n);
  return idx;
}

}  // namespace

std::size_t PropagatorFamily::tri_index(int to, int from) const {
  const int lo = std::min(to, from), hi = std::max(to, from);
  return static_cast<std::size_t>(hi) * (static_cast<std::size_t>(hi) + 1) / 2 +
         static_cast<std::size_t>(lo);
}

PropagatorFamily PropagatorFamily::from_steps(TimeGrid grid, OpPtr op,
                                              Direction dir, std::vector<Mat> steps) {
  if (static_cast<int>(steps.size()) != grid.n_steps())
    throw std::invalid_argument("PropagatorFamily: need one step map per interval");
  PropagatorFamily pf(grid, std::move(op), dir);
  for (const auto& s : steps)
    if (s.rows() != pf.op_->dim() || s.cols() != pf.op_->dim())
      throw std::invalid_argument("PropagatorFamily: step map shape mismatch");
  pf.steps_ = std::move(steps);
  return pf;
}

PropagatorFamily PropagatorFamily::from_blocks(TimeGrid grid, OpPtr op,
                                               Direction dir,
                                               std::vector<Mat> lower_blocks) {
  PropagatorFamily pf(grid, std::move(op), dir);
  const int n = grid.n_steps();
  const std::size_t expected =
      static_cast<std::size_t>(n + 1) * (static_cast<std::size_t>(n) + 2) / 2;
  if (lower_blocks.size() != expected)
    throw std::invalid_argument("PropagatorFamily: causal block count mismatch");
  for (const auto& b : lower_blocks)
    if (b.rows() != pf.op_->dim() || b.cols() != pf.op_->dim())
      throw std::invalid_argument("PropagatorFamily: block shape mismatch");
  // Diagonal blocks are initial conditions: identity.
  for (int i = 0; i <= n; ++i) {
    const Mat& d = lower_blocks[pf.tri_index(i, i)];
    if ((d - Mat::Identity(d.rows(), d.cols())).norm() > 1e-9)
      throw std::invalid_argument(
          "PropagatorFamily: diagonal block is not the identity");
  }
  pf.blocks_ = std::move(lower_blocks);
  return pf;
}

Mat PropagatorFamily::block(int to, int from) const {
  const Eigen::Index d = op_->dim();
  if (to < 0 || to > n() || from < 0 || from > n())
    throw std::invalid_argument("PropagatorFamily::block: index out of range");
  const bool causal = dir_ == Direction::forward ? (to >= from) : (to <= from);
  if (!causal) return Mat::Zero(d, d);
  if (to == from) return Mat::Identity(d, d);
  if (!blocks_.empty()) return blocks_[tri_index(to, from)];
  Mat acc = Mat::Identity(d, d);
  if (dir_ == Direction::forward) {
    for (int k = from; k < to; ++k) acc = steps_[static_cast<std::size_t>(k)] * acc;
  } else {
    for (int k = from - 1; k >= to; --k)
      acc = steps_[static_cast<std::size_t>(k)] * acc;
  }
  return acc;
}

void PropagatorFamily::materialize(std::size_t max_scalars) const {
  if (!blocks_.empty()) return;
  const std::size_t count =
      static_cast<std::size_t>(n() + 1) * (static_cast<std::size_t>(n()) + 2) / 2;
  const std::size_t scalars =
      count * static_cast<std::size_t>(op_->dim()) * static_cast<std::size_t>(op_->dim());
  if (scalars > max_scalars)
    throw std::invalid_argument("PropagatorFamily::materialize: size budget exceeded");
  const Eigen::Index d = op_->dim();
  blocks_.assign(count, Mat());
  if (dir_ == Direction::forward) {
    for (int j = 0; j <= n(); ++j) {
      Mat acc = Mat::Identity(d, d);
      blocks_[tri_index(j, j)] = acc;
      for (int i = j + 1; i <= n(); ++i) {
        acc = steps_[static_cast<std::size_t>(i - 1)] * acc;
        blocks_[tri_index(i, j)] = acc;
      }
    }
  } else {
    for (int i = 0; i <= n(); ++i) {
      Mat acc = Mat::Identity(d, d);
      blocks_[tri_index(i, i)] = acc;
      for (int j = i - 1; j >= 0; --j) {
        acc = steps_[static_cast<std::size_t>(j)] * acc;
        blocks_[tri_index(j, i)] = acc;
      }
    }
  }
}

double PropagatorFamily::uniform_bound() const {
  double bound = 1.0;  // diagonal identity blocks
  if (!blocks_.empty()) {
    for (const auto& b : blocks_) bound = std::max(bound, b.norm());
    return bound;
  }
  const Eigen::Index d = op_->dim();
  for (int j = 0; j <= n(); ++j) {
    Mat acc = Mat::Identity(d, d);
    if (dir_ == Direction::forward) {
      for (int i = j + 1; i <= n(); ++i) {
        acc = steps_[static_cast<std::size_t>(i - 1)] * acc;
        bound = std::max(bound, acc.norm());
      }
    } else {
      for (int i = j - 1; i >= 0; --i) {
        acc = steps_[static_cast<std::size_t>(i)] * acc;
        bound = std::max(bound, acc.norm());
      }
    }
  }
  return bound;
}

double PropagatorFamily::tail_norm(int from) const {
  return dir_ == Direction::forward ? block(n(), from).norm()
                                    : block(0, from).norm();
}

std::string PropagatorFamily::to_text() const {
  materialize();
  nlohmann::json j;
  j["grid"] = {{"t0", grid_.t0()},
               {"t1", grid_.t1()},
               {"n_steps", grid_.n_steps()},
               {"kind", grid_.kind() == GridKind::bounded
                            ? "bounded"
                            : (grid_.kind() == GridKind::half_line ? "half_line"
                                                                   : "full_line_window")}};
  j["dim"] = op_->dim();
  j["direction"] = dir_ == Direction::forward ? "forward" : "backward";
  auto blocks = nlohmann::json::array();
  for (int hi = 0; hi <= n(); ++hi) {
    for (int lo = 0; lo <= hi; ++lo) {
      const int to = dir_ == Direction::forward ? hi : lo;
      const int from = dir_ == Direction::forward ? lo : hi;
      const Mat b = block(to, from);
      std::vector<double> entries;
      entries.reserve(static_cast<std::size_t>(2 * b.size()));
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
          entries.push_back(b(r, c).real());
          entries.push_back(b(r, c).imag());
        }
      blocks.push_back({{"to", to}, {"from", from}, {"entries", entries}});
    }
  }
  j["blocks"] = std::move(blocks);
  return j.dump();
}

PropagatorFamily PropagatorFamily::from_text(const std::string& text, OpPtr op) {
  const auto j = nlohmann::json::parse(text);
  const auto& g = j.at("grid");
  const auto kind_str = g.at("kind").get<std::string>();
  const GridKind kind = kind_str == "bounded"
                            ? GridKind::bounded
                            : (kind_str == "half_line" ? GridKind::half_line
                                                       : GridKind::full_line_window);
  const TimeGrid grid(g.at("t0").get<double>(), g.at("t1").get<double>(),
                      g.at("n_steps").get<int>(), kind);
  if (j.at("dim").get<Eigen::Index>() != op->dim())
    throw std::invalid_argument("PropagatorFamily::from_text: dim mismatch");
  const Direction dir = j.at("direction").get<std::string>() == "forward"
                            ? Direction::forward
                            : Direction::backward;
  const int n = grid.n_steps();
  const std::size_t expected =
      static_cast<std::size_t>(n + 1) * (static_cast<std::size_t>(n) + 2) / 2;
  std::vector<Mat> blocks(expected);
  const Eigen::Index d = op->dim();
  for (const auto& entry : j.at("blocks")) {
    const int to = entry.at("to").get<int>();
    const int from = entry.at("from").get<int>();
    const bool causal = dir == Direction::forward ? (to >= from) : (to <= from);
    if (!causal)
      throw std::invalid_argument(
          "PropagatorFamily::from_text: anti-causal block in file");
    const auto& e = entry.at("entries");
    if (e.size() != static_cast<std::size_t>(2 * d * d))
      throw std::invalid_argument("PropagatorFamily::from_text: bad block size");
    Mat b(d, d);
    std::size_t pos = 0;
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c) {
        b(r, c) = Complex(e[pos].get<double>(), e[pos + 1].get<double>());
        pos += 2;
      }
    const int lo = std::min(to, from), hi = std::max(to, from);
    blocks[static_cast<std::size_t>(hi) * (static_cast<std::size_t>(hi) + 1) / 2 +
           static_cast<std::size_t>(lo)] = std::move(b);
  }
  for (auto& b : blocks)
    if (b.size() == 0) b = Mat::Zero(d, d);  // missing blocks are zero
  return from_blocks(grid, std::move(op), dir, std::move(blocks));
}

PropagatorFamily assemble_green(const FormFamily& ff, const TimeGrid& grid,
                                SteppingScheme scheme) {
  return PropagatorFamily::from_steps(grid, ff.op(), Direction::forward,
                                      step_maps(ff, grid, scheme));
}

PropagatorFamily assemble_backward(const FormFamily& ff, const TimeGrid& grid,
                                   SteppingScheme scheme) {
  return PropagatorFamily::from_steps(grid, ff.op(), Direction::backward,
                                      step_maps(ff.adjoint(), grid, scheme));
}

double chapman_kolmogorov_residual(const PropagatorFamily& pf, int max_points) {
  const auto idx = strided_points(pf.grid().n_steps(), max_points);
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a; b < idx.size(); ++b) {
      for (std::size_t c = b; c < idx.size(); ++c) {
        int i = idx[c], k = idx[b], j = idx[a];
        if (pf.direction() == Direction::backward) std::swap(i, j);
        const Mat direct = pf.block(i, j);
        const Mat composed = pf.block(i, k) * pf.block(k, j);
        worst = std::max(worst, (direct - composed).norm());
      }
    }
  }
  return worst;
}

double adjointness_residual(const PropagatorFamily& forward,
                            const PropagatorFamily& backward) {
  if (!(forward.grid() == backward.grid()))
    throw contract_error("adjointness_residual: families on different grids");
  if (forward.direction() != Direction::forward ||
      backward.direction() != Direction::backward)
    throw contract_error("adjointness_residual: need a forward/backward pair");
  const int n = forward.grid().n_steps();
  const auto idx = strided_points(n, 64);
  double worst = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) {
      const int j = idx[a], i = idx[b];
      worst = std::max(
          worst, (forward.block(i, j).adjoint() - backward.block(j, i)).norm());
    }
  return worst;
}

Trajectory represent(const PropagatorFamily& pf, const PropagatorFamily& pf_back,
                     const Vec& a, const SourceSpec& src) {
  if (!(pf.grid() == src.grid()) || !(pf_back.grid() == src.grid()))
    throw contract_error("represent: grids are inconsistent");
  if (pf.direction() != Direction::forward ||
      pf_back.direction() != Direction::backward)
    throw contract_error("represent: need a forward/backward pair");
  if (!pf.has_steps() || !pf_back.has_steps())
    throw contract_error("represent: requires step-composed families");
  const int n = pf.grid().n_steps();
  const double dt = pf.grid().dt();
  const Eigen::Index d = pf.op()->dim();

  // Adjoint consistency of the two families (the weak-form route relies on
  // it); exact for matched schemes.
  for (int k = 0; k < n; ++k) {
    const double defect =
        (pf.steps()[static_cast<std::size_t>(k)] -
         pf_back.steps()[static_cast<std::size_t>(k)].adjoint())
            .norm();
    if (defect > 1e-9 * (1.0 + pf.steps()[static_cast<std::size_t>(k)].norm()))
      throw contract_error("represent: families are not adjoint-consistent");
  }

  std::vector<std::vector<const DiracTerm*>> at_row(static_cast<std::size_t>(n) + 1);
  for (const auto& di : src.diracs()) {
    const double pos = (di.time - pf.grid().t0()) / dt;
    const int idx = static_cast<int>(std::ceil(pos - 1e-9));
    if (idx < 0 || idx > n)
      throw std::invalid_argument("represent: Dirac time outside the grid");
    at_row[static_cast<std::size_t>(idx)].push_back(&di);
  }

  // Densities of the three smooth parts at every row.
  const auto strong_density = [&](int k) {
    return src.has_h() ? Vec(src.h().row(k)) : Vec(Vec::Zero(d));
  };
  const auto weak_density = [&](int k) {
    Vec out = Vec::Zero(d);
    if (src.has_f2()) out += src.op()->fractional_power(1.0, src.f2().row(k));
    if (src.has_g()) out += src.op()->fractional_power(src.beta(), src.g().row(k));
    return out;
  };

  Mat values(n + 1, d);
  // Homogeneous part and Dirac masses, composed with the forward steps.
  Vec hom = a;
  for (const auto* di : at_row[0]) hom += di->amplitude;
  // Strong (Bochner) integral of h through the forward steps; weak integral
  // of the S f2 + S^beta g parts through the adjoints of the backward steps.
  Vec strong_full = dt * strong_density(0);
  Vec strong_first = strong_density(0);
  Vec weak_full = dt * weak_density(0);
  Vec weak_first = weak_density(0);
  values.row(0) = hom.transpose();
  // Row 0 integrals vanish (trapezoid over a point).
  for (int i = 1; i <= n; ++i) {
    const Mat& p = pf.steps()[static_cast<std::size_t>(i - 1)];
    const Mat qh = pf_back.steps()[static_cast<std::size_t>(i - 1)].adjoint();
    hom = p * hom;
    strong_full = p * strong_full + dt * strong_density(i);
    strong_first = p * strong_first;
    weak_full = qh * weak_full + dt * weak_density(i);
    weak_first = qh * weak_first;
    for (const auto* di : at_row[static_cast<std::size_t>(i)]) hom += di->amplitude;
    const Vec strong_int =
        strong_full - 0.5 * dt * strong_density(i) - 0.5 * dt * strong_first;
    const Vec weak_int =
        weak_full - 0.5 * dt * weak_density(i) - 0.5 * dt * weak_first;
    values.row(i) = (hom + strong_int + weak_int).transpose();
  }
  return Trajectory(pf.grid(), src.op(), std::move(values));
}

bool fundamental_uniqueness_probe(const PropagatorFamily& pf1,
                                  const PropagatorFamily& pf2, double tol,
                                  int max_points) {
  if (!(pf1.grid() == pf2.grid()) || pf1.direction() != pf2.direction())
    return false;
  const auto idx = strided_points(pf1.grid().n_steps(), max_points);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) {
      int to = idx[b], from = idx[a];
      if (pf1.direction() == Direction::backward) std::swap(to, from);
      if ((pf1.block(to, from) - pf2.block(to, from)).norm() > tol) return false;
    }
  return true;
}

double column_lr_constant(const PropagatorFamily& pf, int from, const Vec& a,
                          double r) {
  if (pf.direction() != Direction::forward)
    throw contract_error("column_lr_constant: forward families only");
  const double alpha = 2.0 / r;
  const int n = pf.grid().n_steps();
  const double dt = pf.grid().dt();
  Vec col = a;
  double acc = 0.5 * dt * std::pow(pf.op()->homogeneous_norm(alpha, col), r);
  for (int i = from + 1; i <= n; ++i) {
    col = pf.steps()[static_cast<std::size_t>(i - 1)] * col;
    const double w = (i == n) ? 0.5 * dt : dt;
    acc += w * std::pow(pf.op()->homogeneous_norm(alpha, col), r);
  }
  return std::pow(acc, 1.0 / r) / a.norm();
}

}  // namespace parasol
