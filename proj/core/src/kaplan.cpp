#include "parasol/kaplan.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/FFT>

namespace parasol {

namespace {

// Unscaled DFT across the time rows of an (n x dim) coefficient block.
Mat dft_rows(const Mat& time_rows) {
  Eigen::FFT<double> fft;
  Mat out(time_rows.rows(), time_rows.cols());
  Eigen::VectorXcd in(time_rows.rows()), spec(time_rows.rows());
  for (Eigen::Index c = 0; c < time_rows.cols(); ++c) {
    in = time_rows.col(c);
    fft.fwd(spec, in);
    out.col(c) = spec;
  }
  return out;
}

Mat idft_rows(const Mat& modes) {
  Eigen::FFT<double> fft;
  Mat out(modes.rows(), modes.cols());
  Eigen::VectorXcd in(modes.rows()), time(modes.rows());
  for (Eigen::Index c = 0; c < modes.cols(); ++c) {
    in = modes.col(c);
    fft.inv(time, in);
    out.col(c) = time;
  }
  return out;
}

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace

KaplanSystem::KaplanSystem(const FormFamily& ff, const TimeGrid& grid)
    : ff_(ff), grid_(grid), freqs_(grid), delta_(ff.bound_nu() / (1.0 + ff.bound_M())) {
  if (grid.kind() != GridKind::full_line_window)
    throw contract_error("KaplanSystem: requires a full-line window grid");
  if (!(ff.grid() == grid))
    throw contract_error("KaplanSystem: form family sampled on a different grid");
  if (ff.kappa() != 0.0)
    throw contract_error("KaplanSystem: kappa shifts are handled by the stepper");
  if (!ff.effective_injective())
    throw std::domain_error("KaplanSystem: effective operator not injective");
  riesz_.resize(grid.n_steps(), ff.op()->dim());
  for (int k = 0; k < grid.n_steps(); ++k)
    for (Eigen::Index i = 0; i < ff.op()->dim(); ++i)
      riesz_(k, i) = ff.mu()[i] * ff.mu()[i] + std::abs(freqs_[k]);
  const double defect = coercivity_defect(8, 0x5ca1ab1eULL);
  if (defect > 1e-8)
    throw numeric_error("KaplanSystem: hidden coercivity defect on probes",
                        defect);
}

double KaplanSystem::coercivity_defect(int n_samples, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid_.n_steps();
  const Eigen::Index dim = ff_.op()->dim();
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Mat x(n, dim);
    for (int k = 0; k < n; ++k)
      for (Eigen::Index i = 0; i < dim; ++i)
        x(k, i) = freqs_[k] == 0.0 ? Complex(0, 0)
                                   : Complex(normal(rng), normal(rng));
    const double lhs = (x.conjugate().array() * apply(x).array()).sum().real();
    const double v0sq = ((x.conjugate().array() * x.array()) * riesz_).sum().real();
    if (v0sq > 0.0) worst = std::max(worst, (delta_ * v0sq - lhs) / v0sq);
  }
  return worst;
}

Mat KaplanSystem::form_block(const Mat& x, bool adjoint_family) const {
  Mat time_rows = idft_rows(x);
  for (int k = 0; k < grid_.n_steps(); ++k) {
    const Mat l = ff_.generator(k);
    if (adjoint_family)
      time_rows.row(k) = (l.adjoint() * time_rows.row(k).transpose()).transpose();
    else
      time_rows.row(k) = (l * time_rows.row(k).transpose()).transpose();
  }
  return dft_rows(time_rows);
}

Mat KaplanSystem::apply(const Mat& x) const {
  Mat y = form_block(x, /*adjoint_family=*/false);
  for (int k = 0; k < grid_.n_steps(); ++k) {
    const double tau = freqs_[k];
    y.row(k) += Complex(0.0, tau) * x.row(k);
    y.row(k) *= Complex(1.0, -delta_ * sgn(tau));  // (1 + delta H)^* multiplier
  }
  return y;
}

Mat KaplanSystem::apply_adjoint(const Mat& x) const {
  Mat z = x;
  for (int k = 0; k < grid_.n_steps(); ++k)
    z.row(k) *= Complex(1.0, delta_ * sgn(freqs_[k]));
  Mat y = form_block(z, /*adjoint_family=*/true);
  for (int k = 0; k < grid_.n_steps(); ++k)
    y.row(k) += Complex(0.0, -freqs_[k]) * z.row(k);
  return y;
}

Mat KaplanSystem::modified_rhs(const Mat& density_modes) const {
  Mat b = density_modes;
  for (int k = 0; k < grid_.n_steps(); ++k)
    b.row(k) *= Complex(1.0, -delta_ * sgn(freqs_[k]));
  return b;
}

Trajectory kaplan_solve(const FormFamily& ff, const SourceSpec& src,
                        const TimeGrid& grid, KaplanStats* stats, double rel_tol) {
  src.validate();
  if (src.has_h() || src.has_diracs())
    throw contract_error("kaplan_solve: source must be of dual-energy form "
                         "(f2 and/or g parts only)");
  if (!(src.grid() == grid))
    throw contract_error("kaplan_solve: source on a different grid");
  KaplanSystem sys(ff, grid);

  const int n = grid.n_steps();
  const Eigen::Index dim = ff.op()->dim();
  Mat density(n, dim);
  for (int k = 0; k < n; ++k) density.row(k) = src.density_at(k).transpose();
  const Mat b = sys.modified_rhs(dft_rows(density));

  const auto riesz = sys.riesz();
  const auto jdiv = [&riesz](const Mat& x) { return Mat(x.array() / riesz); };
  const auto jdot = [&riesz](const Mat& x, const Mat& y) {
    return ((x.conjugate().array() * y.array()) * riesz).sum().real();
  };
  const auto op_t = [&](const Mat& x) { return jdiv(sys.apply(x)); };
  const auto op_tadj = [&](const Mat& x) { return jdiv(sys.apply_adjoint(x)); };

  const Mat btil = jdiv(b);
  const double bnorm = std::sqrt(jdot(btil, btil));
  Mat x = Mat::Zero(n, dim);
  double rel_res = 0.0;
  int iter = 0;
  if (bnorm > 0.0) {
    const double delta = sys.delta();
    const double cond = std::max(1.0, ff.bound_M()) *
                        std::sqrt(1.0 + delta * delta) / delta;
    const int max_iter =
        static_cast<int>(4.0 * cond * std::log(2.0 / rel_tol)) + 200;

    Mat r = btil;
    Mat z = op_tadj(r);
    Mat p = z;
    double rho = jdot(z, z);
    for (iter = 0; iter < max_iter; ++iter) {
      rel_res = std::sqrt(jdot(r, r)) / bnorm;
      if (rel_res <= rel_tol) break;
      const Mat q = op_t(p);
      const double qq = jdot(q, q);
      if (!(qq > 0.0)) break;
      const double alpha = rho / qq;
      x += alpha * p;
      r -= alpha * q;
      if (iter % 64 == 63) r = btil - op_t(x);  // periodic re-evaluation
      z = op_tadj(r);
      const double rho_next = jdot(z, z);
      p = z + (rho_next / rho) * p;
      rho = rho_next;
    }
    // True residual for the convergence verdict.
    const Mat rtrue = btil - op_t(x);
    rel_res = std::sqrt(jdot(rtrue, rtrue)) / bnorm;
    if (rel_res > rel_tol * 10.0)
      throw numeric_error("kaplan_solve: iteration did not converge", rel_res);
  }

  Mat values(n + 1, dim);
  values.topRows(n) = idft_rows(x);
  values.row(n) = values.row(0);
  Trajectory u(grid, src.op(), std::move(values));
  if (stats) {
    stats->iterations = iter;
    stats->relative_residual = rel_res;
    stats->v0_norm = v0_norm(ff, u);
    stats->dual_norm = v0_dual_norm(ff, src);
  }
  return u;
}

Complex kaplan_form(const FormFamily& ff, const Trajectory& u, const Trajectory& v) {
  u.check_same_frame(v, "kaplan_form");
  const Trajectory hdu = hilbert_transform(fractional_time_derivative(u, 0.5));
  const Trajectory dv = fractional_time_derivative(v, 0.5);
  const auto w = u.grid().quad_weights();
  Complex acc(0, 0);
  for (int k = 0; k < u.rows(); ++k) {
    const double wk = w[static_cast<std::size_t>(k)];
    if (wk == 0.0) continue;
    acc += wk * (dv.row(k).dot(hdu.row(k)) +
                 ff.form_apply(std::min(k, ff.grid().n_steps()), u.row(k), v.row(k)));
  }
  return acc;
}

double v0_norm(const FormFamily& ff, const Trajectory& u) {
  const FrequencyTrajectory ft = time_fourier(u);
  const double dtau = ft.frequencies().dtau();
  double acc = 0.0;
  for (int k = 0; k < ft.n_modes(); ++k) {
    const double tau = std::abs(ft.frequencies()[k]);
    for (Eigen::Index i = 0; i < ft.modes().cols(); ++i) {
      const double weight = ff.mu()[i] * ff.mu()[i] + tau;
      acc += dtau * weight * std::norm(ft.modes()(k, i));
    }
  }
  return std::sqrt(acc / (2.0 * kPi));
}

double v0_dual_norm(const FormFamily&, const SourceSpec& src) {
  // ||f2|| + ||D_t^{-1/2} S^beta g|| upper-bounds the dual norm for any
  // lambda shift, since the shifted spectrum dominates the plain one.
  double acc = 0.0;
  if (src.has_f2()) acc += src.f2().l2_norm(0.0);
  if (src.has_g()) {
    Trajectory w(src.grid(), src.op());
    for (int k = 0; k <= src.grid().n_steps(); ++k)
      w.set_row(k, src.op()->fractional_power(src.beta(), src.g().row(k)));
    const FrequencyTrajectory ft = time_fourier(w);
    acc += ft.weighted_l2(0.0, -1.0, /*skip_dc=*/true);
  }
  return acc;
}

}  // namespace parasol
