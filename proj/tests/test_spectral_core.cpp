#include <doctest.h>

#include <cmath>
#include <random>

#include "parasol/calderon.hpp"
#include "parasol/quadrature.hpp"
#include "parasol/spectral_operator.hpp"

using namespace parasol;

namespace {

Vec random_vec(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v;
}

RealVec evs(std::initializer_list<double> xs) {
  RealVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("apply_function basic values") {
  SpectralOperator op(evs({1.0, 4.0}));
  Vec v(2);
  v << 1.0, 1.0;
  const Vec id = op.apply_function([](double) { return 1.0; }, v);
  CHECK((id - v).norm() == 0.0);
  const Vec root = op.apply_function([](double t) { return std::sqrt(t); }, v);
  CHECK(root[0] == Complex(1.0, 0.0));
  CHECK(root[1] == Complex(2.0, 0.0));

  SpectralOperator op2(evs({0.0, 3.0}));
  Vec w(2);
  w << 2.0, 4.0;
  const Vec res = op2.apply_function([](double t) { return 1.0 / (1.0 + t); }, w);
  CHECK(std::abs(res[0] - Complex(2, 0)) < 1e-15);
  CHECK(std::abs(res[1] - Complex(1, 0)) < 1e-15);
}

TEST_CASE("apply_function rejects non-finite values naming the eigenvalue") {
  SpectralOperator op(evs({0.0, 2.0}));
  Vec v = Vec::Ones(2);
  bool thrown = false;
  try {
    op.apply_function([](double t) { return 1.0 / t; }, v);
  } catch (const std::domain_error& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("eigenvalue 0") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("functional calculus homomorphism, adjointness, contraction") {
  std::mt19937_64 rng(7);
  SpectralOperator op(evs({0.3, 1.0, 2.5, 4.0}));
  const Vec u = random_vec(4, rng), v = random_vec(4, rng);
  const auto f = [](double t) { return std::exp(-t); };
  const auto g = [](double t) { return 1.0 / (1.0 + t * t); };
  const Vec lhs = op.apply_function([&](double t) { return f(t) * g(t); }, u);
  const Vec rhs = op.apply_function(f, op.apply_function(g, u));
  CHECK((lhs - rhs).norm() < 1e-12);

  const Complex a = v.dot(op.apply_function(f, u));  // <f(S)u, v>
  const Complex b = op.apply_function(f, v).dot(u);  // <u, f(S)v>
  CHECK(std::abs(a - b) < 1e-12);

  double fmax = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) fmax = std::max(fmax, std::abs(f(op.eigenvalue(i))));
  CHECK(op.apply_function(f, u).norm() <= fmax * u.norm() + 1e-15);
}

TEST_CASE("fractional powers") {
  SpectralOperator op(evs({4.0}));
  Vec v(1);
  v << 2.0;
  CHECK((op.fractional_power(0.0, v) - v).norm() == 0.0);
  CHECK(std::abs(op.fractional_power(-0.5, v)[0] - Complex(1, 0)) < 1e-15);

  // Composition oracle: S^{1/3} S^{2/3} = S by direct eigenvalue products.
  std::mt19937_64 rng(11);
  SpectralOperator big(evs({0.5, 1.1, 2.0, 3.7, 9.0}));
  const Vec u = random_vec(5, rng);
  const Vec lhs = big.fractional_power(1.0 / 3.0, big.fractional_power(2.0 / 3.0, u));
  const Vec rhs = big.fractional_power(1.0, u);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());

  SpectralOperator noninj(evs({0.0, 1.0}));
  bool thrown = false;
  try {
    noninj.fractional_power(-0.5, Vec::Ones(2));
  } catch (const std::domain_error& e) {
    thrown = true;
    CHECK(std::string(e.what()).find("S not injective") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("homogeneous norms and the moments inequality") {
  SpectralOperator op(evs({1.0, 2.0}));
  Vec v(2);
  v << 1.0, 1.0;
  CHECK(op.homogeneous_norm(0.0, v) == doctest::Approx(std::sqrt(2.0)));
  CHECK(op.homogeneous_norm(1.0, v) == doctest::Approx(std::sqrt(5.0)));

  std::mt19937_64 rng(13);
  SpectralOperator big(evs({0.4, 0.9, 1.7, 2.8, 5.0, 7.7}));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec u = random_vec(6, rng);
    const double alpha = -1.0 + 2.0 * uni(rng);
    const double beta = alpha + uni(rng);
    const double theta = uni(rng);
    const double gamma = theta * alpha + (1.0 - theta) * beta;
    const double lhs = big.homogeneous_norm(gamma, u);
    const double rhs = std::pow(big.homogeneous_norm(alpha, u), theta) *
                       std::pow(big.homogeneous_norm(beta, u), 1.0 - theta);
    CHECK(lhs <= rhs + 1e-12 * (1.0 + rhs));
  }
}

TEST_CASE("shift spectrum") {
  SpectralOperator op(evs({0.0, 2.0}));
  const SpectralOperator same = op.shift(0.0);
  CHECK((same.eigenvalues() - op.eigenvalues()).norm() == 0.0);

  SpectralOperator zero(evs({0.0}));
  CHECK(zero.shift(1.0).eigenvalue(0) == doctest::Approx(1.0));
  CHECK_FALSE(zero.injective());
  CHECK(zero.shift(1.0).injective());

  SpectralOperator three(evs({3.0}));
  CHECK(three.shift(4.0).eigenvalue(0) == doctest::Approx(5.0));

  // Graph-norm identity for the unit shift.
  std::mt19937_64 rng(17);
  SpectralOperator big(evs({0.0, 1.0, 2.0, 3.5}));
  const SpectralOperator shifted = big.shift(1.0);
  CHECK(shifted.eigenvalues().minCoeff() >= 1.0);
  const Vec v = random_vec(4, rng);
  const double lhs = std::pow(shifted.homogeneous_norm(1.0, v), 2);
  const double rhs = v.squaredNorm() + std::pow(big.homogeneous_norm(1.0, v), 2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
}

TEST_CASE("argument validation") {
  SpectralOperator op(evs({1.0, 2.0}));
  CHECK_THROWS_AS(op.shift(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(op.fractional_power(0.5, Vec::Ones(3)), std::invalid_argument);
  RealVec unsorted(2);
  unsorted << 2.0, 1.0;
  CHECK_THROWS_AS(SpectralOperator{unsorted}, std::invalid_argument);
  RealVec negative(2);
  negative << -1.0, 1.0;
  CHECK_THROWS_AS(SpectralOperator{negative}, std::invalid_argument);
}

TEST_CASE("kernel split") {
  std::mt19937_64 rng(19);
  SpectralOperator inj(evs({0.5, 1.5}));
  const Vec v = random_vec(2, rng);
  const auto [ran_i, nul_i] = inj.kernel_split(v);
  CHECK((ran_i - v).norm() == 0.0);
  CHECK(nul_i.norm() == 0.0);

  SpectralOperator mixed(evs({0.0, 1.0}));
  Vec w(2);
  w << 3.0, 5.0;
  const auto [ran, nul] = mixed.kernel_split(w);
  CHECK(ran[0] == Complex(0, 0));
  CHECK(ran[1] == Complex(5, 0));
  CHECK(nul[0] == Complex(3, 0));
  CHECK(nul[1] == Complex(0, 0));
  CHECK(std::abs(w.squaredNorm() - ran.squaredNorm() - nul.squaredNorm()) < 1e-12);
}

TEST_CASE("hermitian construction invariants") {
  std::mt19937_64 rng(23);
  Mat g(4, 4);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      g(r, c) = Complex(std::normal_distribution<double>()(rng),
                        std::normal_distribution<double>()(rng));
  const Mat h = g.adjoint() * g;  // positive semidefinite
  const SpectralOperator op = SpectralOperator::from_hermitian(h);
  CHECK((op.basis().adjoint() * op.basis() - Mat::Identity(4, 4)).norm() < 1e-12);
  const Mat rec = op.basis() * op.eigenvalues().asDiagonal() * op.basis().adjoint();
  CHECK((rec - rec.adjoint()).norm() < 1e-12);
  CHECK((rec - h).norm() < 1e-10 * h.norm());
  CHECK(op.eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("operator JSON round trip") {
  SpectralOperator op(evs({0.0, 1.25, 3.5}));
  const SpectralOperator back = load_operator(save_operator(op));
  CHECK((back.eigenvalues() - op.eigenvalues()).norm() == 0.0);

  Mat h(2, 2);
  h << Complex(2, 0), Complex(0, -1), Complex(0, 1), Complex(3, 0);
  const SpectralOperator hop = SpectralOperator::from_hermitian(h);
  const SpectralOperator hback = load_operator(save_operator(hop));
  CHECK((hback.eigenvalues() - hop.eigenvalues()).norm() < 1e-12);

  CHECK_THROWS_AS(load_operator("{\"nonsense\": 1}"), std::invalid_argument);
}

TEST_CASE("calderon reproducing integral") {
  const CalderonProfile prof = CalderonProfile::bump();
  CHECK(prof.normalization() == doctest::Approx(1.0).epsilon(1e-6));

  SpectralOperator op(evs({1.0}));
  Vec zero = Vec::Zero(1);
  CHECK(calderon_reproduce(op, prof, 1e-2, zero).norm() == 0.0);

  // Oracle: adaptive quadrature of the profile over the truncated range.
  Vec v(1);
  v << 1.0;
  const double eps = 1e-4;
  const double oracle = adaptive_simpson(
      [&prof](double x) { return prof(std::exp(x)); }, std::log(eps),
      -std::log(eps), 1e-12);
  const Vec out = calderon_reproduce(op, prof, eps, v);
  // Trapezoid at the default node density against the adaptive oracle.
  CHECK(std::abs(out[0].real() - oracle) < 1e-6);
  CHECK(std::abs(out[0] - Complex(1, 0)) < 1e-6);

  // Truncation error shrinks monotonically as the window widens.
  SpectralOperator multi(evs({0.2, 1.0, 5.0}));
  std::mt19937_64 rng(29);
  const Vec u = random_vec(3, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (double e : {0.5, 0.25, 0.125, 0.0625}) {
    const double err = (calderon_reproduce(multi, prof, e, u) - u).norm();
    CHECK(err <= prev + 1e-15);
    prev = err;
  }

  CHECK_THROWS_AS(calderon_reproduce(op, prof, 1.5, v), std::invalid_argument);
  CHECK_THROWS_AS(calderon_reproduce(op, prof, 0.0, v), std::invalid_argument);
  SpectralOperator noninj(evs({0.0, 1.0}));
  CHECK_THROWS_AS(calderon_reproduce(noninj, prof, 0.1, Vec::Ones(2)),
                  std::domain_error);
}
