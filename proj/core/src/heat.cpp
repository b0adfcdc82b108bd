#include "parasol/heat.hpp"

#include <cmath>
#include <sstream>

#include "parasol/fourier.hpp"
#include "parasol/quadrature.hpp"

namespace parasol {

namespace {

void check_frame(const OpPtr& op, const SourceSpec& src, const TimeGrid& grid,
                 const char* where) {
  src.validate();
  if (src.op()->dim() != op->dim())
    throw contract_error(std::string(where) + ": source over a different operator");
  if (!(src.grid() == grid))
    throw contract_error(std::string(where) + ": source on a different grid");
}

// First grid row at or after the Dirac time (snapped against roundoff).
int dirac_row(const TimeGrid& grid, double s) {
  const double pos = (s - grid.t0()) / grid.dt();
  const int idx = static_cast<int>(std::ceil(pos - 1e-9));
  if (idx < 0 || idx > grid.n_steps())
    throw std::invalid_argument("duhamel_solve: Dirac time outside the grid");
  return idx;
}

}  // namespace

double expm1_weight(double z) {
  if (z == 0.0) return 1.0;
  if (std::abs(z) < 1e-4) return 1.0 - z / 2.0 + z * z / 6.0;
  return -std::expm1(-z) / z;
}

// Companion weight for the linear-in-time part of the source over a step:
// psi(z) = (z - 1 + e^{-z}) / z^2 with psi(0) = 1/2.
double expm1_slope_weight(double z) {
  if (std::abs(z) < 1e-4) return 0.5 - z / 6.0 + z * z / 24.0;
  return (z - 1.0 + std::exp(-z)) / (z * z);
}

Trajectory duhamel_solve(const OpPtr& op, const SourceSpec& src,
                         const TimeGrid& grid) {
  check_frame(op, src, grid, "duhamel_solve");
  const int n = grid.n_steps();
  const double dt = grid.dt();
  const Eigen::Index dim = op->dim();

  RealVec decay(dim), weight(dim), slope(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double z = op->eigenvalue(i) * op->eigenvalue(i) * dt;
    decay[i] = std::exp(-z);
    weight[i] = expm1_weight(z) * dt;
    slope[i] = expm1_slope_weight(z) * dt;
  }

  std::vector<std::vector<const DiracTerm*>> at_row(static_cast<std::size_t>(n) + 1);
  for (const auto& d : src.diracs())
    at_row[static_cast<std::size_t>(dirac_row(grid, d.time))].push_back(&d);

  Mat values(n + 1, dim);
  Vec u = Vec::Zero(dim);
  for (const auto* d : at_row[0]) u += d->amplitude;
  values.row(0) = u.transpose();
  Vec s_left = src.density_at(0);
  for (int k = 0; k < n; ++k) {
    // Exact exponential integration of the linear source interpolant over
    // the step (reduces to the plain phi weight when the samples agree).
    const Vec s_right = src.density_at(k + 1);
    for (Eigen::Index i = 0; i < dim; ++i)
      u[i] = decay[i] * u[i] + weight[i] * s_left[i] +
             slope[i] * (s_right[i] - s_left[i]);
    for (const auto* d : at_row[static_cast<std::size_t>(k) + 1])
      u += d->amplitude;
    values.row(k + 1) = u.transpose();
    s_left = s_right;
  }
  return Trajectory(grid, src.op(), std::move(values));
}

Trajectory fourier_heat_solve(const OpPtr& op, const SourceSpec& src,
                              const TimeGrid& grid, FourierDiagnostics* diag) {
  check_frame(op, src, grid, "fourier_heat_solve");
  if (grid.kind() != GridKind::full_line_window)
    throw contract_error("fourier_heat_solve: requires a full-line window grid");
  if (!op->injective())
    throw std::domain_error("fourier_heat_solve: S not injective");

  Trajectory density(grid, src.op());
  for (int k = 0; k <= grid.n_steps(); ++k)
    density.set_row(k, src.density_at(k));

  FrequencyTrajectory ft = time_fourier(density);
  for (const auto& d : src.diracs()) {
    for (int k = 0; k < ft.n_modes(); ++k)
      ft.modes().row(k) +=
          std::polar(1.0, -ft.frequencies()[k] * d.time) * d.amplitude.transpose();
  }
  for (int k = 0; k < ft.n_modes(); ++k) {
    const double tau = ft.frequencies()[k];
    for (Eigen::Index i = 0; i < op->dim(); ++i) {
      const double l2 = op->eigenvalue(i) * op->eigenvalue(i);
      ft.modes()(k, i) /= Complex(l2, tau);
    }
  }
  Trajectory u = inverse_time_fourier(ft);
  if (diag) {
    // The window contract is about the data; the solution ratio is reported
    // as a wrap-around diagnostic.
    diag->source_edge_ratio = density.edge_decay_ratio();
    diag->solution_edge_ratio = u.edge_decay_ratio();
    diag->edge_decay_ok = diag->source_edge_ratio <= 1e-8;
  }
  return u;
}

HeatConstants heat_constants(double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0))
    throw std::invalid_argument("heat_constants: alpha outside [-1,1]");
  HeatConstants out;
  if (alpha == 1.0 || alpha == -1.0) {
    out.Cprime = 1.0;  // supremum attained in the limit t -> 0 resp. infinity
  } else {
    const double t = std::pow((1.0 - alpha) / (1.0 + alpha), 0.25);
    out.Cprime = std::pow(t, 1.0 - alpha) / std::sqrt(1.0 + t * t * t * t);
  }
  if (alpha < 0.0) {
    // In x = log t the integrand is e^{-2 alpha x} / (1 + e^{4x}); bounds
    // chosen so both tails are below 1e-16 of the bulk.
    const double x_lo = -45.0 / (-2.0 * alpha);
    const double x_hi = 45.0 / (4.0 + 2.0 * alpha);
    const auto integrand = [alpha](double x) {
      return std::exp(-2.0 * alpha * x) / (1.0 + std::exp(4.0 * x));
    };
    const double integral = adaptive_simpson(integrand, x_lo, x_hi, 1e-10);
    out.C = std::sqrt(integral / (2.0 * kPi));
  }
  return out;
}

RealVec semigroup_energy_integrals(const SpectralOperator& op, double rel_tol) {
  RealVec out(op.dim());
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    const double l = op.eigenvalue(i);
    if (l == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const double l2 = l * l;
    const double s_max = 20.0 / l2;
    out[i] = adaptive_simpson(
        [l2](double s) { return l2 * std::exp(-2.0 * l2 * s); }, 0.0, s_max,
        rel_tol * 0.5);
  }
  return out;
}

Report apriori_report(const OpPtr& op, const SourceSpec& src,
                      const Trajectory& u) {
  check_frame(op, src, u.grid(), "apriori_report");
  Report rep;
  const double dt = u.grid().dt();
  const auto slack = [dt](double scale) {
    return 1e-8 + 4.0 * dt * std::max(1.0, scale);
  };

  // Quadratic equality per eigenmode (quadrature against the analytic 1/2).
  {
    const RealVec q = semigroup_energy_integrals(*op);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < op->dim(); ++i)
      if (op->eigenvalue(i) > 0.0) worst = std::max(worst, std::abs(q[i] - 0.5));
    rep.add(equality_check("heat_quadratic_equality",
                           "semigroup energy integral equals half the mass, "
                           "per eigenmode",
                           0.5 + worst, 0.5, 1e-8));
  }

  // L^1-class part (h plus Dirac masses): sup and energy bounds.
  if (src.has_h() || src.has_diracs()) {
    SourceSpec part(src.grid(), src.op());
    if (src.has_h()) part.set_h(src.h());
    double mass = src.has_h() ? src.h().l1_norm() : 0.0;
    double peak = 0.0;
    for (const auto& d : src.diracs()) {
      part.add_dirac(d.time, d.amplitude);
      mass += d.amplitude.norm();
      peak = std::max(peak, d.amplitude.norm());
    }
    if (src.has_h()) peak = std::max(peak, src.h().sup_norm());
    const Trajectory uh = duhamel_solve(op, part, u.grid());
    rep.add(bound_check("heat_sup_by_l1",
                        "uniform bound of the flow by the L1 mass of the data",
                        uh.sup_norm(), mass, slack(peak)));
    rep.add(bound_check("heat_energy_by_l1",
                        "energy norm bounded by the L1 mass over sqrt(2)",
                        uh.l2_norm(1.0), mass / std::sqrt(2.0), slack(peak)));
    // Combined sup bound through the integral identity decomposition.
    rep.add(bound_check(
        "heat_sup_combined_l1",
        "sup bound sqrt(2)*energy + (1+sqrt(2))*L1 mass for L1 sources",
        uh.sup_norm(), std::sqrt(2.0) * uh.l2_norm(1.0) + (1.0 + std::sqrt(2.0)) * mass,
        slack(peak)));
  }

  // Dual-energy part S f2.
  if (src.has_f2()) {
    SourceSpec part(src.grid(), src.op());
    part.set_f2(src.f2());
    const Trajectory uf = duhamel_solve(op, part, u.grid());
    const double dual = src.f2().l2_norm(0.0);
    const double peak = src.f2().sup_norm();
    rep.add(bound_check("heat_sup_by_dual_energy",
                        "uniform bound by the dual energy norm over sqrt(2)",
                        uf.sup_norm(), dual / std::sqrt(2.0), slack(peak)));
    rep.add(bound_check("heat_energy_by_dual_energy",
                        "energy norm bounded by the dual energy norm",
                        uf.l2_norm(1.0), dual, slack(peak)));
  }

  // Half-derivative scale bounds for the S^beta g part (window grids only).
  if (src.has_g() && src.beta() > 0.0 &&
      u.grid().kind() == GridKind::full_line_window && op->injective()) {
    double alpha = -src.beta();
    if (alpha > -0.01) {
      alpha = -0.01;  // the C(alpha) constant diverges as alpha -> 0
      rep.metadata["alpha_clamp"] = "clamped to -0.01 for the dual-scale bounds";
    }
    SourceSpec part(src.grid(), src.op());
    part.set_g(src.g(), src.rho());
    Trajectory density(u.grid(), src.op());
    for (int k = 0; k <= u.grid().n_steps(); ++k)
      density.set_row(k, part.density_at(k));
    double dc = 0.0;
    const double wnorm = w_alpha_norm(time_fourier(density), alpha, &dc);
    if (dc <= 1e-10 * (wnorm + 1e-300)) {
      const Trajectory ug = duhamel_solve(op, part, u.grid());
      const HeatConstants hc = heat_constants(alpha);
      const double peak = density.sup_norm();
      rep.add(bound_check("heat_sup_by_w_scale",
                          "uniform bound by the dual half-derivative scale",
                          ug.sup_norm(), *hc.C * wnorm, slack(peak)));
      rep.add(bound_check("heat_energy_by_w_scale",
                          "energy norm bounded by the dual half-derivative scale",
                          ug.l2_norm(1.0), hc.Cprime * wnorm, slack(peak)));
    } else {
      rep.metadata["w_bounds_skipped"] = "source carries a nonzero DC mode";
    }
  }
  return rep;
}

}  // namespace parasol
