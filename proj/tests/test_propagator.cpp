#include <doctest.h>

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "parasol/propagator.hpp"

using namespace parasol;

namespace {

OpPtr make_op(std::initializer_list<double> xs) {
  RealVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return std::make_shared<SpectralOperator>(v);
}

Vec random_vec(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v;
}

}  // namespace

TEST_CASE("green family of the autonomous heat flow") {
  const OpPtr op = make_op({0.5, 1.0, 2.0});
  const TimeGrid grid(0.0, 1.0, 64, GridKind::bounded);
  const FormFamily id = FormFamily::identity(op, grid);
  const PropagatorFamily green = assemble_green(id, grid);

  // Causality and the identity on the diagonal.
  CHECK(green.block(2, 5).norm() == 0.0);
  CHECK((green.block(3, 3) - Mat::Identity(3, 3)).norm() == 0.0);

  // Matrix-exponential oracle, first order in dt.
  double worst = 0.0;
  for (int j : {0, 10, 32}) {
    for (int i : {10, 32, 64}) {
      if (i < j) continue;
      Mat expref(3, 3);
      expref.setZero();
      for (int c = 0; c < 3; ++c)
        expref(c, c) = std::exp(-(grid.point(i) - grid.point(j)) *
                                op->eigenvalue(c) * op->eigenvalue(c));
      worst = std::max(worst, (green.block(i, j) - expref).norm());
    }
  }
  CHECK(worst < 0.5 * grid.dt() * op->eigenvalue(2) * op->eigenvalue(2));

  CHECK(green.uniform_bound() <= std::sqrt(3.0) + 1e-12);
}

TEST_CASE("adjointness of forward and backward families") {
  const OpPtr op = make_op({0.4, 1.1, 2.3, 3.1});
  const TimeGrid grid(0.0, 1.0, 48, GridKind::bounded);
  const FormFamily ff = FormFamily::random_accretive(op, grid, 2.0, 0.5, 31);
  const PropagatorFamily green = assemble_green(ff, grid);
  const PropagatorFamily back = assemble_backward(ff, grid);
  CHECK(adjointness_residual(green, back) < 1e-12);

  // Backward causality is mirrored.
  CHECK(back.block(7, 3).norm() == 0.0);
  CHECK(back.block(3, 7).norm() > 0.0);

  // Self-adjoint autonomous flow: the backward family equals the forward one
  // with swapped arguments.
  const FormFamily id = FormFamily::identity(op, grid);
  const PropagatorFamily gf = assemble_green(id, grid);
  const PropagatorFamily gb = assemble_backward(id, grid);
  CHECK((gf.block(20, 5) - gb.block(5, 20)).norm() < 1e-13);
}

TEST_CASE("chapman-kolmogorov composition") {
  const OpPtr op = make_op({0.5, 1.2, 2.8});
  const TimeGrid grid(0.0, 1.0, 32, GridKind::bounded);
  const FormFamily ff = FormFamily::rotation(op, grid, 3.0, 0.4, 37);
  const PropagatorFamily green = assemble_green(ff, grid);
  CHECK(chapman_kolmogorov_residual(green) < 1e-12);

  // A zeroed interior block is detected with residual at block scale.
  green.materialize();
  std::vector<Mat> blocks;
  for (int hi = 0; hi <= grid.n_steps(); ++hi)
    for (int lo = 0; lo <= hi; ++lo) blocks.push_back(green.block(hi, lo));
  const int n = grid.n_steps();
  const auto index = [](int hi, int lo) {
    return static_cast<std::size_t>(hi) * (static_cast<std::size_t>(hi) + 1) / 2 +
           static_cast<std::size_t>(lo);
  };
  const double zeroed_norm = blocks[index(n / 2, n / 4)].norm();
  blocks[index(n / 2, n / 4)].setZero();
  const PropagatorFamily broken =
      PropagatorFamily::from_blocks(grid, op, Direction::forward, std::move(blocks));
  CHECK(chapman_kolmogorov_residual(broken, n + 1) >= zeroed_norm - 1e-12);

  // Serialization round trip leaves the residual unchanged.
  const PropagatorFamily loaded =
      PropagatorFamily::from_text(green.to_text(), op);
  CHECK(chapman_kolmogorov_residual(loaded) < 1e-12);
  CHECK(fundamental_uniqueness_probe(green, loaded, 1e-12));
}

TEST_CASE("uniqueness probe") {
  const OpPtr op = make_op({0.7, 1.9});
  const TimeGrid grid(0.0, 1.0, 24, GridKind::bounded);
  const FormFamily ff = FormFamily::random_accretive(op, grid, 2.0, 0.5, 41);
  const PropagatorFamily green = assemble_green(ff, grid);
  CHECK(fundamental_uniqueness_probe(green, green, 1e-15));

  green.materialize();
  std::vector<Mat> blocks;
  for (int hi = 0; hi <= grid.n_steps(); ++hi)
    for (int lo = 0; lo <= hi; ++lo) blocks.push_back(green.block(hi, lo));
  blocks[11] += 1e-3 * Mat::Ones(2, 2);  // off-diagonal block (4, 1)
  const PropagatorFamily perturbed =
      PropagatorFamily::from_blocks(grid, op, Direction::forward, std::move(blocks));
  CHECK_FALSE(fundamental_uniqueness_probe(green, perturbed, 1e-6));

  // Refinement: families at dt and dt/2 agree on the shared grid to O(dt).
  const TimeGrid fine = grid.refined();
  const PropagatorFamily green_fine = assemble_green(ff.resampled(fine), fine);
  double worst = 0.0;
  for (int j = 0; j <= grid.n_steps(); ++j)
    for (int i = j; i <= grid.n_steps(); ++i)
      worst = std::max(worst,
                       (green.block(i, j) - green_fine.block(2 * i, 2 * j)).norm());
  CHECK(worst <= 6.0 * grid.dt());
}

TEST_CASE("representation of mixed sources") {
  const OpPtr op = make_op({0.5, 1.0, 1.9});
  const TimeGrid grid(0.0, 1.0, 96, GridKind::bounded);
  const FormFamily ff = FormFamily::rotation(op, grid, 2.0, 0.4, 43);
  const PropagatorFamily green = assemble_green(ff, grid);
  const PropagatorFamily back = assemble_backward(ff, grid);
  std::mt19937_64 rng(43);
  const Vec a = random_vec(3, rng);

  // Pure initial data reproduces the homogeneous column exactly.
  SourceSpec empty(grid, op);
  const Trajectory hom = represent(green, back, a, empty);
  const Trajectory direct = cauchy_step_solve(ff, a, grid);
  CHECK((hom.values() - direct.values()).norm() < 1e-12);

  // Scalar constant-in-time source: closed-form accumulation oracle.
  {
    const OpPtr one = make_op({1.0});
    const TimeGrid g(0.0, 1.0, 128, GridKind::bounded);
    const FormFamily idf = FormFamily::identity(one, g);
    const PropagatorFamily gf = assemble_green(idf, g);
    const PropagatorFamily gb = assemble_backward(idf, g);
    SourceSpec src(g, one);
    src.set_h(Trajectory(g, one, Mat::Ones(g.n_steps() + 1, 1)));
    const Trajectory u = represent(gf, gb, Vec::Zero(1), src);
    double worst = 0.0;
    for (int k = 0; k <= g.n_steps(); ++k)
      worst = std::max(worst, std::abs(u.values()(k, 0) -
                                       Complex(1.0 - std::exp(-g.point(k)))));
    CHECK(worst < 3.0 * g.dt());
  }

  // Mixed source including a Dirac mass against the direct solve.
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat f2v(grid.n_steps() + 1, 3), gv(grid.n_steps() + 1, 3), hv(grid.n_steps() + 1, 3);
  for (int k = 0; k <= grid.n_steps(); ++k)
    for (int c = 0; c < 3; ++c) {
      const double t = grid.point(k);
      f2v(k, c) = std::sin(2.0 * t + c) * 0.7;
      gv(k, c) = std::cos(3.0 * t - c) * 0.5;
      hv(k, c) = std::exp(-t) * 0.4;
    }
  SourceSpec src(grid, op);
  src.set_f2(Trajectory(grid, op, std::move(f2v)));
  src.set_g(Trajectory(grid, op, std::move(gv)), 4.0);
  src.set_h(Trajectory(grid, op, std::move(hv)));
  src.add_dirac(grid.point(grid.n_steps() / 3), random_vec(3, rng));

  const Trajectory urep = represent(green, back, a, src);
  const Trajectory udir = cauchy_step_solve(ff, a, src, grid);
  double worst = 0.0;
  for (int k = 0; k <= grid.n_steps(); ++k)
    worst = std::max(worst, (urep.row(k) - udir.row(k)).norm());
  CHECK(worst / udir.sup_norm() <= 5.0 * grid.dt());
}

TEST_CASE("column estimates are recorded and finite") {
  const OpPtr op = make_op({0.5, 1.5, 2.5});
  const TimeGrid grid(0.0, 2.0, 64, GridKind::half_line);
  const FormFamily ff = FormFamily::random_accretive(op, grid, 2.0, 0.5, 47);
  const PropagatorFamily green = assemble_green(ff, grid);
  std::mt19937_64 rng(47);
  const Vec a = random_vec(3, rng);
  for (double r : {2.0, 4.0}) {
    const double c = column_lr_constant(green, 0, a, r);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
  }
  CHECK(green.tail_norm(0) < 1.0);  // decay diagnostic on the half-line
}

TEST_CASE("loader re-validates invariants") {
  const OpPtr op = make_op({1.0, 2.0});
  const TimeGrid grid(0.0, 1.0, 4, GridKind::bounded);
  const FormFamily id = FormFamily::identity(op, grid);
  const PropagatorFamily green = assemble_green(id, grid);
  const std::string text = green.to_text();

  // Corrupt a diagonal block: the loader must reject it.
  auto j = nlohmann::json::parse(text);
  for (auto& entry : j.at("blocks"))
    if (entry.at("to") == entry.at("from")) {
      entry.at("entries")[0] = 2.5;
      break;
    }
  CHECK_THROWS_AS(PropagatorFamily::from_text(j.dump(), op), std::invalid_argument);

  // An anti-causal block in the file is rejected, not transposed.
  auto j2 = nlohmann::json::parse(text);
  for (auto& entry : j2.at("blocks"))
    if (entry.at("to") != entry.at("from")) {
      std::swap(entry.at("to"), entry.at("from"));
      break;
    }
  CHECK_THROWS_AS(PropagatorFamily::from_text(j2.dump(), op), std::invalid_argument);
}
