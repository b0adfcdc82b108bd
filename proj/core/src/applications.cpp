#include "parasol/applications.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

namespace parasol {

namespace {

// Composite Simpson node count guaranteeing ~1e-10 accuracy on products of
// modes up to combined order `max_order` over a length-L interval:
// L (max_order pi / N)^4 / 180 <= 1e-10.
int simpson_nodes(int max_order, double length) {
  const double target = std::pow(180.0 * 1e-10 / std::max(1.0, length), 0.25);
  int n = static_cast<int>(std::ceil(max_order * kPi / target));
  n = std::max(n, 64);
  if (n % 2) ++n;
  return n;
}

}  // namespace

OperatorWithForm dirichlet_operator(const DirichletSpec& spec, const TimeGrid& grid) {
  if (spec.length <= 0 || spec.n_modes < 1)
    throw std::invalid_argument("dirichlet_operator: bad domain or mode count");
  const int nm = spec.n_modes;
  const double L = spec.length;
  RealVec lambda(nm);
  for (int k = 1; k <= nm; ++k) lambda[k - 1] = k * kPi / L;
  auto op = std::make_shared<SpectralOperator>(lambda);

  const int N = simpson_nodes(2 * nm, L);
  const double h = L / N;
  // Simpson weights and cosine tables for the product-to-sum reduction
  // cos(k s) cos(l s) = (cos((k-l)s) + cos((k+l)s))/2.
  auto weights = std::make_shared<std::vector<double>>(static_cast<std::size_t>(N) + 1);
  for (int q = 0; q <= N; ++q)
    (*weights)[static_cast<std::size_t>(q)] =
        h / 3.0 * (q == 0 || q == N ? 1.0 : (q % 2 ? 4.0 : 2.0));
  auto cos_table = std::make_shared<Eigen::MatrixXd>(2 * nm + 1, N + 1);
  for (int m = 0; m <= 2 * nm; ++m)
    for (int q = 0; q <= N; ++q)
      (*cos_table)(m, q) = std::cos(m * kPi * (q * h) / L);

  const auto coeff = spec.coefficient;
  const double M = spec.M, nu = spec.nu;
  auto gen = [=](double t) {
    Eigen::VectorXcd a_nodes(N + 1);
    for (int q = 0; q <= N; ++q) {
      const Complex a = coeff(t, q * h);
      if (a.real() < nu - 1e-12 || std::abs(a) > M + 1e-12)
        throw spec_error("dirichlet_operator: coefficient violates its bounds");
      a_nodes[q] = a;
    }
    Eigen::VectorXcd c(2 * nm + 1);  // c_m = int A(t,x) cos(m pi x / L) dx
    for (int m = 0; m <= 2 * nm; ++m) {
      Complex acc(0, 0);
      for (int q = 0; q <= N; ++q)
        acc += (*weights)[static_cast<std::size_t>(q)] * a_nodes[q] * (*cos_table)(m, q);
      c[m] = acc;
    }
    Mat a_t(nm, nm);
    for (int k = 1; k <= nm; ++k)
      for (int l = 1; l <= nm; ++l)
        a_t(l - 1, k - 1) = (c[std::abs(k - l)] + c[k + l]) / L;
    return a_t;
  };
  FormFamily form(op, grid, gen, spec.M, spec.nu);
  return {op, std::move(form)};
}

Mat fractional_grid_form(const FractionalKernelSpec& spec, double t) {
  const int m = spec.n_grid;
  const double period = 2.0 * kPi;
  const double w = period / m;
  Mat f = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;  // the difference factor vanishes on the diagonal
      const double xa = a * w, xb = b * w;
      const double dist = std::min(std::abs(xa - xb), period - std::abs(xa - xb));
      const Complex k = spec.kernel(t, xa, xb);
      if (k.real() < spec.lambda_ell - 1e-12 ||
          std::abs(k) > 1.0 / spec.lambda_ell + 1e-12)
        throw spec_error("fractional_operator: kernel violates its accretivity bounds");
      const Complex c = w * k / std::pow(dist, 1.0 + 2.0 * spec.gamma);
      f(a, a) += c;
      f(b, b) += c;
      f(a, b) -= c;
      f(b, a) -= c;
    }
  }
  return f;
}

FractionalResult fractional_operator(const FractionalKernelSpec& spec,
                                     const TimeGrid& grid) {
  if (!(spec.gamma > 0.0 && spec.gamma < 1.0))
    throw std::invalid_argument("fractional_operator: gamma must lie in (0,1)");
  if (spec.n_grid < 4)
    throw std::invalid_argument("fractional_operator: need at least 4 grid points");
  if (!(spec.lambda_ell > 0.0))
    throw std::invalid_argument("fractional_operator: lambda_ell must be positive");
  const int m = spec.n_grid;
  const int dim = m - 1;  // mean-zero subspace: the DC mode is dropped

  // Signed modes ordered by |k| ascending (S eigenvalues |k|^gamma).
  std::vector<int> modes;
  for (int idx = 1; idx < m; ++idx) modes.push_back(idx <= m / 2 ? idx : idx - m);
  std::sort(modes.begin(), modes.end(), [](int a, int b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b;
  });
  RealVec lambda(dim);
  for (int i = 0; i < dim; ++i)
    lambda[i] = std::pow(std::abs(modes[static_cast<std::size_t>(i)]), spec.gamma);
  auto op = std::make_shared<SpectralOperator>(lambda);

  // Unitary map from mode coefficients to scaled grid samples.
  auto u_map = std::make_shared<Mat>(m, dim);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < dim; ++i)
      (*u_map)(j, i) = std::polar(1.0 / std::sqrt(double(m)),
                                  modes[static_cast<std::size_t>(i)] * (2.0 * kPi * j / m));

  RealVec inv_lambda(dim);
  for (int i = 0; i < dim; ++i) inv_lambda[i] = 1.0 / lambda[i];
  const FractionalKernelSpec spec_copy = spec;
  auto gen = [spec_copy, u_map, inv_lambda](double t) {
    const Mat f = fractional_grid_form(spec_copy, t);
    Mat a_t = u_map->adjoint() * f * (*u_map);
    for (Eigen::Index r = 0; r < a_t.rows(); ++r)
      for (Eigen::Index c = 0; c < a_t.cols(); ++c)
        a_t(r, c) *= inv_lambda[r] * inv_lambda[c];
    return a_t;
  };

  // Measure the comparability constants over the sampled steps.
  double nu_meas = std::numeric_limits<double>::infinity();
  double m_meas = 0.0;
  for (int k = 0; k <= grid.n_steps(); ++k) {
    const Mat a_t = gen(grid.point(k));
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (a_t + a_t.adjoint())));
    nu_meas = std::min(nu_meas, es.eigenvalues().minCoeff());
    m_meas = std::max(m_meas, a_t.operatorNorm());
  }
  if (!(nu_meas > 0.0))
    throw spec_error("fractional_operator: assembled form lost accretivity");
  FormFamily form(op, grid, gen, m_meas, nu_meas);
  return {op, std::move(form), nu_meas, m_meas};
}

WeightSpec WeightSpec::constant(double c, double x0, double x1, int n_cells) {
  if (!(c > 0)) throw spec_error("WeightSpec::constant: weight must be positive");
  WeightSpec w{x0, x1, n_cells, {}, {}, {}};
  w.node_w.assign(static_cast<std::size_t>(n_cells) + 1, c);
  w.avg_w.assign(static_cast<std::size_t>(n_cells), c);
  w.avg_winv.assign(static_cast<std::size_t>(n_cells), 1.0 / c);
  w.validate();
  return w;
}

WeightSpec WeightSpec::abs_power(double p, double x0, double x1, int n_cells) {
  if (!(p > -1.0 && p < 1.0))
    throw spec_error("WeightSpec::abs_power: need p in (-1,1) for local integrability");
  WeightSpec w{x0, x1, n_cells, {}, {}, {}};
  const double dx = (x1 - x0) / n_cells;
  const auto prim = [p](double x) {  // antiderivative of |x|^p
    const double q = p + 1.0;
    return std::copysign(std::pow(std::abs(x), q) / q, x);
  };
  const auto prim_inv = [p](double x) {  // antiderivative of |x|^{-p}
    const double q = 1.0 - p;
    return std::copysign(std::pow(std::abs(x), q) / q, x);
  };
  for (int c = 0; c <= n_cells; ++c) {
    const double x = x0 + c * dx;
    w.node_w.push_back(std::max(std::pow(std::abs(x), p), 1e-12));
  }
  for (int c = 0; c < n_cells; ++c) {
    const double a = x0 + c * dx, b = a + dx;
    w.avg_w.push_back((prim(b) - prim(a)) / dx);
    w.avg_winv.push_back((prim_inv(b) - prim_inv(a)) / dx);
  }
  w.validate();
  return w;
}

WeightSpec WeightSpec::exp_weight(double x0, double x1, int n_cells) {
  WeightSpec w{x0, x1, n_cells, {}, {}, {}};
  const double dx = (x1 - x0) / n_cells;
  for (int c = 0; c <= n_cells; ++c) w.node_w.push_back(std::exp(x0 + c * dx));
  for (int c = 0; c < n_cells; ++c) {
    const double a = x0 + c * dx, b = a + dx;
    w.avg_w.push_back((std::exp(b) - std::exp(a)) / dx);
    w.avg_winv.push_back((std::exp(-a) - std::exp(-b)) / dx);
  }
  w.validate();
  return w;
}

WeightSpec WeightSpec::rough_seeded(std::uint64_t seed, double x0, double x1,
                                    int n_cells) {
  WeightSpec w{x0, x1, n_cells, {}, {}, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int c = 0; c <= n_cells; ++c) w.node_w.push_back(std::exp(uni(rng)));
  for (int c = 0; c < n_cells; ++c) {
    // Cell averages from the node values (trapezoid in the cell).
    const double a = w.node_w[static_cast<std::size_t>(c)];
    const double b = w.node_w[static_cast<std::size_t>(c) + 1];
    w.avg_w.push_back(0.5 * (a + b));
    w.avg_winv.push_back(0.5 * (1.0 / a + 1.0 / b));
  }
  w.validate();
  return w;
}

void WeightSpec::validate() const {
  if (!(x1 > x0) || n_cells < 2) throw spec_error("WeightSpec: bad domain");
  if (node_w.size() != static_cast<std::size_t>(n_cells) + 1 ||
      avg_w.size() != static_cast<std::size_t>(n_cells) ||
      avg_winv.size() != static_cast<std::size_t>(n_cells))
    throw spec_error("WeightSpec: sample arrays of the wrong length");
  for (double v : node_w)
    if (!(v > 0)) throw spec_error("WeightSpec: nonpositive weight sample");
  for (std::size_t c = 0; c < avg_w.size(); ++c)
    if (!(avg_w[c] > 0) || !(avg_winv[c] > 0))
      throw spec_error("WeightSpec: nonpositive cell average");
}

OperatorWithForm degenerate_operator(const WeightSpec& spec,
                                     const std::function<Complex(double, double)>& A,
                                     double M, double nu, const TimeGrid& grid) {
  spec.validate();
  const int m = spec.n_cells;
  const double dx = (spec.x1 - spec.x0) / m;

  // Difference operator into cell midpoints and the two diagonal weights.
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m + 1);
  for (int c = 0; c < m; ++c) {
    g(c, c) = -1.0 / dx;
    g(c, c + 1) = 1.0 / dx;
  }
  Eigen::VectorXd mass(m + 1), cell_mass(m);
  for (int i = 0; i <= m; ++i)
    mass[i] = spec.node_w[static_cast<std::size_t>(i)] * dx;
  for (int c = 0; c < m; ++c)
    cell_mass[c] = spec.avg_w[static_cast<std::size_t>(c)] * dx;

  const Eigen::MatrixXd stiffness = g.transpose() * cell_mass.asDiagonal() * g;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      stiffness, Eigen::MatrixXd(mass.asDiagonal()));
  if (es.info() != Eigen::Success)
    throw numeric_error("degenerate_operator: generalized eigensolver failed", 0.0);
  // Roundoff of the eigensolver lives on the mu = lambda^2 scale; clamp
  // there so the kernel mode (the constants) comes out exactly zero.
  const double mu_cut = 1e-12 * std::max(0.0, es.eigenvalues().maxCoeff());
  RealVec lambda(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double mu = es.eigenvalues()[i];
    lambda[i] = mu <= mu_cut ? 0.0 : std::sqrt(mu);
  }
  auto op = std::make_shared<SpectralOperator>(lambda);
  auto phi = std::make_shared<Eigen::MatrixXd>(es.eigenvectors());  // W-orthonormal

  RealVec pinv(m + 1);
  for (int i = 0; i <= m; ++i) pinv[i] = lambda[i] > 0 ? 1.0 / lambda[i] : 0.0;
  const WeightSpec wspec = spec;
  auto gen = [wspec, A, M, nu, g, phi, pinv, dx, m](double t) {
    Eigen::VectorXcd a_mid(m);
    for (int c = 0; c < m; ++c) {
      const double x_mid = wspec.x0 + (c + 0.5) * dx;
      const double w_cell = wspec.avg_w[static_cast<std::size_t>(c)];
      const Complex a = A(t, x_mid);
      if (a.real() < nu * w_cell - 1e-10 || std::abs(a) > M * w_cell + 1e-10)
        throw spec_error("degenerate_operator: coefficient violates nu w <= Re A, "
                         "|A| <= M w");
      a_mid[c] = a * dx;
    }
    const Mat f = g.transpose() * a_mid.asDiagonal() * g;
    Mat a_t = phi->transpose() * f * (*phi);
    for (Eigen::Index r = 0; r < a_t.rows(); ++r)
      for (Eigen::Index c = 0; c < a_t.cols(); ++c) a_t(r, c) *= pinv[r] * pinv[c];
    return a_t;
  };
  FormFamily form(op, grid, gen, M, nu);
  return {op, std::move(form)};
}

double a2_constant(const WeightSpec& spec, int max_depth) {
  spec.validate();
  const int m = spec.n_cells;
  std::vector<double> pw(static_cast<std::size_t>(m) + 1, 0.0), pv(pw);
  for (int c = 0; c < m; ++c) {
    pw[static_cast<std::size_t>(c) + 1] =
        pw[static_cast<std::size_t>(c)] + spec.avg_w[static_cast<std::size_t>(c)];
    pv[static_cast<std::size_t>(c) + 1] =
        pv[static_cast<std::size_t>(c)] + spec.avg_winv[static_cast<std::size_t>(c)];
  }
  const auto product = [&](int lo, int hi) {
    const double len = hi - lo;
    const double aw = (pw[static_cast<std::size_t>(hi)] - pw[static_cast<std::size_t>(lo)]) / len;
    const double av = (pv[static_cast<std::size_t>(hi)] - pv[static_cast<std::size_t>(lo)]) / len;
    return aw * av;
  };
  double best = 0.0;
  for (int depth = 0; depth <= max_depth; ++depth) {
    const std::int64_t pieces = std::int64_t{1} << depth;
    for (std::int64_t q = 0; q < pieces; ++q) {
      const int lo = static_cast<int>(q * m / pieces);
      const int hi = static_cast<int>((q + 1) * m / pieces);
      if (hi > lo) best = std::max(best, product(lo, hi));
    }
    if (pieces >= m) break;  // finer dyadic levels no longer split cells
  }
  // All grid-aligned intervals at the finest (cell) level.  O(m^2) products
  // through the prefix sums.
  for (int lo = 0; lo < m; ++lo)
    for (int hi = lo + 1; hi <= m; ++hi) best = std::max(best, product(lo, hi));
  return best;
}

}  // namespace parasol
