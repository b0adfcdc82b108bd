#include "parasol/form_family.hpp"

#include <cmath>
#include <memory>
#include <random>

#include <nlohmann/json.hpp>

namespace parasol {

namespace {

constexpr Eigen::Index kCacheBudget = 1 << 22;  // complex entries

Mat random_gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  return g;
}

// Hermitian with operator norm <= 1.
Mat unit_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  Mat g = random_gaussian(n, rng);
  Mat h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (top > 0) h /= top;
  return h;
}

}  // namespace

FormFamily::FormFamily(OpPtr op, TimeGrid grid, std::function<Mat(double)> coefficient,
                       double M, double nu, double kappa, double lambda_shift)
    : op_(std::move(op)), grid_(grid), gen_(std::move(coefficient)), M_(M),
      nu_(nu), kappa_(kappa), lambda_(lambda_shift) {
  if (!(M_ > 0) || !(nu_ > 0))
    throw std::invalid_argument("FormFamily: need M > 0 and nu > 0");
  if (kappa_ < 0 || lambda_ < 0)
    throw std::invalid_argument("FormFamily: kappa and lambda must be >= 0");
  if (grid_.n_steps() < 2)
    throw std::invalid_argument("FormFamily: need n_steps >= 2");
  mu_.resize(op_->dim());
  for (Eigen::Index i = 0; i < op_->dim(); ++i)
    mu_[i] = std::hypot(lambda_, op_->eigenvalue(i));
  const Eigen::Index entries =
      static_cast<Eigen::Index>(grid_.n_steps() + 1) * op_->dim() * op_->dim();
  if (entries <= kCacheBudget) {
    cache_.reserve(static_cast<std::size_t>(grid_.n_steps()) + 1);
    for (int k = 0; k <= grid_.n_steps(); ++k) cache_.push_back(gen_(grid_.point(k)));
  }
}

FormFamily FormFamily::identity(OpPtr op, const TimeGrid& grid) {
  const Eigen::Index n = op->dim();
  return FormFamily(std::move(op), grid,
                    [n](double) { return Mat::Identity(n, n); }, 1.0, 1.0);
}

FormFamily FormFamily::autonomous(OpPtr op, const TimeGrid& grid, Mat A, double M,
                                  double nu, double kappa, double lambda_shift) {
  auto shared = std::make_shared<Mat>(std::move(A));
  if (shared->rows() != op->dim() || shared->cols() != op->dim())
    throw std::invalid_argument("FormFamily::autonomous: coefficient shape mismatch");
  return FormFamily(std::move(op), grid, [shared](double) { return *shared; }, M,
                    nu, kappa, lambda_shift);
}

FormFamily FormFamily::rotation(OpPtr op, const TimeGrid& grid, double omega,
                                double eps, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("FormFamily::rotation: need eps in (0,1)");
  std::mt19937_64 rng(seed);
  auto h1 = std::make_shared<Mat>(unit_hermitian(op->dim(), rng));
  auto h2 = std::make_shared<Mat>(unit_hermitian(op->dim(), rng));
  const Eigen::Index n = op->dim();
  auto gen = [h1, h2, omega, eps, n](double t) {
    return Mat(Mat::Identity(n, n) + eps * (std::cos(omega * t) * (*h1) +
                                            std::sin(omega * t) * (*h2)));
  };
  return FormFamily(std::move(op), grid, gen, 1.0 + eps, 1.0 - eps);
}

FormFamily FormFamily::random_accretive(OpPtr op, const TimeGrid& grid, double M,
                                        double nu, std::uint64_t seed) {
  if (!(M > nu))
    throw std::invalid_argument("FormFamily::random_accretive: need M > nu");
  // A_k = a I + b H_k + b K_k with ||H_k|| <= 1 Hermitian and K_k skew of the
  // same size: Re >= (a - b) = nu, ||A|| <= a + 2b = M.
  const double b = (M - nu) / 3.0;
  const double a = nu + b;
  std::mt19937_64 rng(seed);
  const Eigen::Index n = op->dim();
  auto steps = std::make_shared<std::vector<Mat>>();
  steps->reserve(static_cast<std::size_t>(grid.n_steps()) + 1);
  for (int k = 0; k <= grid.n_steps(); ++k) {
    const Mat h = unit_hermitian(n, rng);
    Mat g = random_gaussian(n, rng);
    Mat skew = 0.5 * (g - g.adjoint());
    const double top = skew.operatorNorm();
    if (top > 0) skew /= top;
    steps->push_back(a * Mat::Identity(n, n) + b * h + b * skew);
  }
  const TimeGrid base = grid;
  auto gen = [steps, base](double t) {
    // Piecewise constant in t over the construction grid.
    int k = static_cast<int>(std::floor((t - base.t0()) / base.dt() + 1e-9));
    k = std::max(0, std::min(base.n_steps(), k));
    return (*steps)[static_cast<std::size_t>(k)];
  };
  return FormFamily(std::move(op), grid, gen, M, nu);
}

Mat FormFamily::coefficient(int k) const {
  if (k < 0 || k > grid_.n_steps())
    throw std::invalid_argument("FormFamily::coefficient: step index out of range");
  if (!cache_.empty()) return cache_[static_cast<std::size_t>(k)];
  return gen_(grid_.point(k));
}

Mat FormFamily::generator(int k) const {
  Mat a = coefficient(k);
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) *= mu_[r] * mu_[c];
  return a;
}

Complex FormFamily::form_apply(int k, const Vec& u, const Vec& v) const {
  op_->check_vector(u, "form_apply");
  op_->check_vector(v, "form_apply");
  const Vec su = mu_.asDiagonal() * u;
  const Vec sv = mu_.asDiagonal() * v;
  return sv.dot(coefficient(k) * su);  // <A Su, Sv>, conjugate-linear in v
}

FormFamily FormFamily::adjoint() const {
  auto base = gen_;
  FormFamily out(op_, grid_,
                 [base](double t) { return Mat(base(t).adjoint()); }, M_, nu_,
                 kappa_, lambda_);
  out.omega_ = omega_;
  return out;
}

FormFamily FormFamily::with_exponential_shift(double omega) const {
  if (omega < 0)
    throw std::invalid_argument("FormFamily::with_exponential_shift: omega >= 0");
  FormFamily out(op_, grid_, gen_, M_, nu_, kappa_, lambda_);
  out.omega_ = omega;
  return out;
}

FormFamily FormFamily::with_bounds(double M, double nu) const {
  FormFamily out(op_, grid_, gen_, M, nu, kappa_, lambda_);
  out.omega_ = omega_;
  return out;
}

FormFamily FormFamily::with_shifts(double kappa, double lambda_shift) const {
  FormFamily out(op_, grid_, gen_, M_, nu_, kappa, lambda_shift);
  out.omega_ = omega_;
  return out;
}

FormFamily FormFamily::resampled(const TimeGrid& grid) const {
  FormFamily out(op_, grid, gen_, M_, nu_, kappa_, lambda_);
  out.omega_ = omega_;
  return out;
}

Report FormFamily::ellipticity_report(int n_samples, std::uint64_t seed,
                                      double slack_rel) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&] {
    Vec v(op_->dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      v[i] = Complex(normal(rng), normal(rng));
    return v;
  };
  double worst_bound = 0.0, worst_coercive = 0.0, scale = 1.0;
  for (int s = 0; s < n_samples; ++s) {
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(grid_.n_steps()));
    const Vec u = draw(), v = draw();
    const double su = (mu_.asDiagonal() * u).norm();
    const double sv = (mu_.asDiagonal() * v).norm();
    const Complex buv = form_apply(k, u, v);
    const Complex buu = form_apply(k, u, u);
    worst_bound = std::max(worst_bound, std::abs(buv) - M_ * su * sv);
    worst_coercive =
        std::max(worst_coercive,
                 nu_ * su * su - (buu.real() + kappa_ * u.squaredNorm()));
    scale = std::max(scale, su * sv);
  }
  Report rep;
  rep.add(bound_check("form_boundedness",
                      "sampled |B_t(u,v)| <= M ||u|| ||v|| in the form norm",
                      worst_bound, 0.0, slack_rel * scale));
  rep.add(bound_check("form_coercivity",
                      "sampled Re B_t(u,u) + kappa ||u||^2 >= nu ||u||^2 in "
                      "the form norm",
                      worst_coercive, 0.0, slack_rel * scale));
  return rep;
}

FormFamily load_form_family(const std::string& json_text, OpPtr op,
                            const TimeGrid& grid) {
  const auto j = nlohmann::json::parse(json_text);
  const double M = j.at("M").get<double>();
  const double nu = j.at("nu").get<double>();
  const double kappa = j.value("kappa", 0.0);
  const double lambda = j.value("lambda", 0.0);
  const auto& a = j.at("A");
  if (a.is_object()) {
    const auto kind = a.at("kind").get<std::string>();
    if (kind == "identity") {
      return FormFamily(op, grid, [n = op->dim()](double) { return Mat::Identity(n, n); },
                        M, nu, kappa, lambda);
    }
    if (kind == "rotation") {
      const double omega = a.value("omega", 1.0);
      const double eps = a.value("eps", 0.5);
      const auto seed = a.value("seed", std::uint64_t{1});
      FormFamily base = FormFamily::rotation(op, grid, omega, eps, seed);
      return FormFamily(op, grid, [base](double t) {
        const int k = static_cast<int>(
            std::floor((t - base.grid().t0()) / base.grid().dt() + 1e-9));
        return base.coefficient(std::max(0, std::min(base.grid().n_steps(), k)));
      }, M, nu, kappa, lambda);
    }
    if (kind == "random_accretive") {
      const auto seed = a.value("seed", std::uint64_t{1});
      return FormFamily::random_accretive(op, grid, M, nu, seed);
    }
    throw std::invalid_argument("load_form_family: unknown kind " + kind);
  }
  // Per-step matrices, row-major re/im pairs.
  auto steps = std::make_shared<std::vector<Mat>>();
  const Eigen::Index n = op->dim();
  for (const auto& entry : a) {
    Mat m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto& row = entry.at(static_cast<std::size_t>(r));
        m(r, c) = Complex(row.at(static_cast<std::size_t>(2 * c)).get<double>(),
                          row.at(static_cast<std::size_t>(2 * c + 1)).get<double>());
      }
    steps->push_back(std::move(m));
  }
  if (steps->size() != static_cast<std::size_t>(grid.n_steps()) + 1)
    throw std::invalid_argument("load_form_family: need n_steps+1 matrices");
  auto gen = [steps, grid](double t) {
    int k = static_cast<int>(std::floor((t - grid.t0()) / grid.dt() + 1e-9));
    k = std::max(0, std::min(grid.n_steps(), k));
    return (*steps)[static_cast<std::size_t>(k)];
  };
  return FormFamily(op, grid, gen, M, nu, kappa, lambda);
}

}  // namespace parasol
