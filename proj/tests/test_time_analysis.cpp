#include <doctest.h>

#include <cmath>
#include <random>

#include "parasol/fourier.hpp"
#include "parasol/identities.hpp"

using namespace parasol;

namespace {

OpPtr make_op(std::initializer_list<double> xs) {
  RealVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return std::make_shared<SpectralOperator>(v);
}

// Random window trajectory with the periodic wrap row in place.
Trajectory random_window(const TimeGrid& grid, const OpPtr& op,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat values(grid.n_steps() + 1, op->dim());
  for (int k = 0; k < grid.n_steps(); ++k)
    for (Eigen::Index c = 0; c < op->dim(); ++c)
      values(k, c) = Complex(normal(rng), normal(rng));
  values.row(grid.n_steps()) = values.row(0);
  return Trajectory(grid, op, std::move(values));
}

// Band-limited mean-zero trajectory from a handful of harmonics.
Trajectory band_limited(const TimeGrid& grid, const OpPtr& op,
                        std::mt19937_64& rng, int max_mode = 6) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat values = Mat::Zero(grid.n_steps() + 1, op->dim());
  const double base = 2.0 * kPi / grid.period();
  for (int m = 1; m <= max_mode; ++m) {
    for (Eigen::Index c = 0; c < op->dim(); ++c) {
      const Complex amp(normal(rng), normal(rng));
      for (int k = 0; k <= grid.n_steps(); ++k)
        values(k, c) += amp * std::polar(1.0, m * base * grid.point(k));
    }
  }
  return Trajectory(grid, op, std::move(values));
}

}  // namespace

TEST_CASE("plancherel identity on the window") {
  const TimeGrid grid(-4.0, 4.0, 128, GridKind::full_line_window);
  const OpPtr op = make_op({0.5, 1.0, 2.0});
  std::mt19937_64 rng(3);

  const Trajectory zero = Trajectory::zero(grid, op);
  CHECK(time_fourier(zero).l2_norm(0.0) == 0.0);

  for (int trial = 0; trial < 5; ++trial) {
    const Trajectory tr = random_window(grid, op, rng);
    CHECK(std::abs(plancherel_ratio(tr) - 1.0) < 1e-10);
  }
}

TEST_CASE("gaussian bump matches the closed-form transform") {
  const TimeGrid grid(-8.0, 8.0, 256, GridKind::full_line_window);
  const OpPtr op = make_op({1.0});
  Mat values(grid.n_steps() + 1, 1);
  for (int k = 0; k <= grid.n_steps(); ++k)
    values(k, 0) = std::exp(-grid.point(k) * grid.point(k));
  const Trajectory tr(grid, op, std::move(values));
  const FrequencyTrajectory ft = time_fourier(tr);
  for (int k = 0; k < ft.n_modes(); ++k) {
    const double tau = ft.frequencies()[k];
    const Complex expected = std::sqrt(kPi) * std::exp(-tau * tau / 4.0);
    CHECK(std::abs(ft.modes()(k, 0) - expected) < 1e-6);
  }
  // Round trip back to time.
  const Trajectory back = inverse_time_fourier(ft);
  CHECK((back.values() - tr.values()).norm() < 1e-10);
}

TEST_CASE("fractional time derivative") {
  const TimeGrid grid(0.0, 2.0 * kPi, 128, GridKind::full_line_window);
  const OpPtr op = make_op({1.0, 3.0});
  std::mt19937_64 rng(5);

  // beta = 0 is the identity on mean-zero data.
  const Trajectory u = band_limited(grid, op, rng).mean_free();
  CHECK((fractional_time_derivative(u, 0.0).values() - u.values()).norm() < 1e-10);

  // Exact-period cosine: per-mode multiplier oracle.
  const double omega = 3.0;  // 3 full periods on [0, 2pi]
  Mat values(grid.n_steps() + 1, 2);
  for (int k = 0; k <= grid.n_steps(); ++k) {
    values(k, 0) = std::cos(omega * grid.point(k));
    values(k, 1) = 0.0;
  }
  const Trajectory cosine(grid, op, std::move(values));
  const Trajectory half = fractional_time_derivative(cosine, 0.5);
  for (int k = 0; k <= grid.n_steps(); ++k) {
    const Complex expected = std::sqrt(omega) * std::cos(omega * grid.point(k));
    CHECK(std::abs(half.values()(k, 0) - expected) < 1e-8);
  }

  // Half of a half is a whole derivative in modulus.
  const Trajectory uu = band_limited(grid, op, rng);
  const Trajectory twice =
      fractional_time_derivative(fractional_time_derivative(uu, 0.5), 0.5);
  const Trajectory once = fractional_time_derivative(uu, 1.0);
  CHECK((twice.values() - once.values()).norm() < 1e-8 * once.values().norm());

  CHECK_THROWS_AS(fractional_time_derivative(uu, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(fractional_time_derivative(uu, -0.1), std::invalid_argument);
  const TimeGrid bounded(0.0, 1.0, 16, GridKind::bounded);
  const Trajectory ub = Trajectory::zero(bounded, op);
  CHECK_THROWS_AS(fractional_time_derivative(ub, 0.5), contract_error);
}

TEST_CASE("hilbert transform") {
  const TimeGrid grid(0.0, 2.0 * kPi, 128, GridKind::full_line_window);
  const OpPtr op = make_op({1.0});
  std::mt19937_64 rng(7);

  Mat ones = Mat::Ones(grid.n_steps() + 1, 1);
  CHECK(hilbert_transform(Trajectory(grid, op, ones)).values().norm() < 1e-12);

  Mat values(grid.n_steps() + 1, 1);
  const double omega = 2.0;
  for (int k = 0; k <= grid.n_steps(); ++k)
    values(k, 0) = std::cos(omega * grid.point(k));
  const Trajectory cosine(grid, op, std::move(values));
  const Trajectory h = hilbert_transform(cosine);
  for (int k = 0; k <= grid.n_steps(); ++k)
    CHECK(std::abs(h.values()(k, 0) - Complex(-std::sin(omega * grid.point(k)))) <
          1e-10);

  const Trajectory u = band_limited(grid, op, rng).mean_free();
  const Trajectory hh = hilbert_transform(hilbert_transform(u));
  CHECK((hh.values() + u.values()).norm() < 1e-10 * u.values().norm());
  // Isometry and skew-adjointness on mean-zero data.
  CHECK(hilbert_transform(u).l2_norm(0.0) ==
        doctest::Approx(u.l2_norm(0.0)).epsilon(1e-12));
  const auto w = grid.quad_weights();
  Complex pairing(0, 0);
  const Trajectory hu = hilbert_transform(u);
  for (int k = 0; k < u.rows(); ++k)
    pairing += w[static_cast<std::size_t>(k)] * u.row(k).dot(hu.row(k));
  CHECK(std::abs(pairing.real()) < 1e-12 * u.l2_norm(0.0) * u.l2_norm(0.0));
}

TEST_CASE("solution-scale norm") {
  const TimeGrid grid(-6.0, 6.0, 128, GridKind::full_line_window);
  const OpPtr op = make_op({0.5, 1.5, 3.0});
  std::mt19937_64 rng(11);

  CHECK(v_alpha_norm(Trajectory::zero(grid, op), 0.0) == 0.0);

  const Trajectory u = band_limited(grid, op, rng).mean_free();
  const double full = v_alpha_norm(u, 1.0);
  CHECK(full == doctest::Approx(std::sqrt(2.0) * u.l2_norm(1.0)).epsilon(1e-9));

  // Equivalence with the combined-symbol norm for alpha in [0, 1].
  for (double alpha : {0.0, 0.5}) {
    const FrequencyTrajectory ft = time_fourier(u);
    double acc = 0.0;
    for (int k = 0; k < ft.n_modes(); ++k) {
      const double root = std::sqrt(std::abs(ft.frequencies()[k]));
      for (Eigen::Index c = 0; c < 3; ++c) {
        const double lam = op->eigenvalue(c);
        const double symbol =
            std::pow(lam, alpha) * std::pow(lam + root, 1.0 - alpha);
        acc += ft.frequencies().dtau() * symbol * symbol *
               std::norm(ft.modes()(k, c));
      }
    }
    const double combined = std::sqrt(acc / (2.0 * kPi));
    const double ratio = combined / v_alpha_norm(u, alpha);
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
}

TEST_CASE("mixed norms and the interpolation inequality") {
  const TimeGrid grid(-6.0, 6.0, 96, GridKind::full_line_window);
  const OpPtr op = make_op({0.5, 1.0, 2.0, 4.0});
  std::mt19937_64 rng(13);

  const Trajectory u = random_window(grid, op, rng);
  CHECK(u.mixed_norm(std::numeric_limits<double>::infinity(), 0.0) ==
        doctest::Approx(u.sup_norm()));
  CHECK(u.mixed_norm(2.0, 1.0) == doctest::Approx(u.l2_norm(1.0)));
  CHECK_THROWS_AS(u.mixed_norm(4.0, 0.3), std::invalid_argument);

  for (int trial = 0; trial < 100; ++trial) {
    const Trajectory tr = random_window(grid, op, rng);
    const double lhs = tr.mixed_norm(4.0, 0.5);
    const double rhs =
        std::pow(tr.l2_norm(1.0), 0.5) * std::pow(tr.sup_norm(), 0.5);
    CHECK(lhs <= rhs + 1e-12 * (1.0 + rhs));
  }
}

TEST_CASE("half-derivative embedding check") {
  const TimeGrid grid(0.0, 2.0 * kPi, 128, GridKind::full_line_window);
  const OpPtr op = make_op({1.0, 2.0});
  std::mt19937_64 rng(17);

  const auto zero = hls_check(Trajectory::zero(grid, op), 4.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  // r = 2 reduces to an exact equality with constant one on mean-zero data.
  const Trajectory u = band_limited(grid, op, rng).mean_free();
  const auto two = hls_check(u, 2.0);
  CHECK(two.lhs == doctest::Approx(two.rhs).epsilon(1e-10));
  CHECK(two.constant == 1.0);

  // Single-mode data: both sides finite, ratio within the documented constant.
  Mat values(grid.n_steps() + 1, 2);
  for (int k = 0; k <= grid.n_steps(); ++k) {
    values(k, 0) = std::polar(1.0, 2.0 * grid.point(k));
    values(k, 1) = 0.0;
  }
  const auto single = hls_check(Trajectory(grid, op, std::move(values)), 4.0);
  CHECK(single.rhs > 0.0);
  CHECK(single.lhs <= single.constant * single.rhs);
  CHECK(single.pass());
}

TEST_CASE("fractional derivative commutes with spatial powers") {
  const TimeGrid grid(-5.0, 5.0, 64, GridKind::full_line_window);
  const OpPtr op = make_op({0.7, 1.3, 2.9});
  std::mt19937_64 rng(19);
  const Trajectory u = random_window(grid, op, rng);
  const Trajectory a = fractional_time_derivative(u.map_power(0.5), 0.5);
  const Trajectory b = fractional_time_derivative(u, 0.5).map_power(0.5);
  CHECK((a.values() - b.values()).norm() < 1e-10 * (1.0 + a.values().norm()));
}

TEST_CASE("integral identity residuals") {
  // Constant trajectory in the kernel with no source: exact zero.
  const OpPtr mixed = make_op({0.0, 1.0});
  const TimeGrid grid(0.0, 1.0, 64, GridKind::bounded);
  Mat constant = Mat::Zero(grid.n_steps() + 1, 2);
  constant.col(0).setOnes();
  const Trajectory ker(grid, mixed, std::move(constant));
  CHECK(integral_identity_residual(ker, nullptr, nullptr, 0.0, 0,
                                   grid.n_steps()) == 0.0);

  // Scalar closed form u = e^{-t}, f = -e^{-t} against S = 1.
  const OpPtr one = make_op({1.0});
  const auto solve_residual = [&](int n) {
    const TimeGrid g(0.0, 1.0, n, GridKind::bounded);
    Mat uv(n + 1, 1), fv(n + 1, 1);
    for (int k = 0; k <= n; ++k) {
      uv(k, 0) = std::exp(-g.point(k));
      fv(k, 0) = -std::exp(-g.point(k));
    }
    const Trajectory u(g, one, std::move(uv));
    const Trajectory f(g, one, std::move(fv));
    return integral_identity_residual(u, &f, nullptr, 0.0, 0, n);
  };
  const double coarse = solve_residual(64);
  const double fine = solve_residual(128);
  CHECK(coarse < 1e-3);
  CHECK(fine < coarse / 3.0);  // second-order quadrature

  // Polarized variant on the same data against a second exponential.
  const int n = 96;
  const TimeGrid g(0.0, 1.0, n, GridKind::bounded);
  Mat uv(n + 1, 1), fv(n + 1, 1), vv(n + 1, 1), gv(n + 1, 1);
  for (int k = 0; k <= n; ++k) {
    uv(k, 0) = std::exp(-g.point(k));
    fv(k, 0) = -std::exp(-g.point(k));
    vv(k, 0) = std::exp(-2.0 * g.point(k));
    gv(k, 0) = -2.0 * std::exp(-2.0 * g.point(k));
  }
  const Trajectory u(g, one, std::move(uv)), f(g, one, std::move(fv));
  const Trajectory v(g, one, std::move(vv)), fv2(g, one, std::move(gv));
  const double res =
      polarized_identity_residual(u, &f, nullptr, v, &fv2, nullptr, 0.0, 0, n);
  CHECK(res < 5e-4);

  CHECK_THROWS_AS(
      integral_identity_residual(u, &f, nullptr, 0.0, 5, 3),
      std::invalid_argument);
  CHECK_THROWS_AS(
      integral_identity_residual(u, &f, nullptr, 0.0, 0, n + 5),
      std::invalid_argument);
}

TEST_CASE("shape and argument validation") {
  const TimeGrid grid(0.0, 1.0, 8, GridKind::bounded);
  const OpPtr op = make_op({1.0, 2.0});
  CHECK_THROWS_AS(Trajectory(grid, op, Mat::Zero(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory(grid, op, Mat::Zero(9, 5)), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(1.0, 0.0, 8, GridKind::bounded), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0, GridKind::bounded), std::invalid_argument);
  const Trajectory tr = Trajectory::zero(grid, op);
  CHECK_THROWS_AS(tr.lr_norm(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hls_constant(1.5), std::invalid_argument);
}

TEST_CASE("trajectory CSV round trip") {
  const TimeGrid grid(0.0, 1.0, 8, GridKind::bounded);
  const OpPtr op = make_op({0.5, 2.0});
  std::mt19937_64 rng(23);
  const Trajectory tr = random_window(grid, op, rng);
  const Trajectory back = trajectory_from_csv(trajectory_to_csv(tr), grid, op);
  CHECK((back.values() - tr.values()).norm() == 0.0);
}
