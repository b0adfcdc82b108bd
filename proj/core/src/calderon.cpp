#include "parasol/calderon.hpp"

#include <cmath>

#include "parasol/quadrature.hpp"

namespace parasol {

namespace {

double raw_bump(double x, double log_radius) {
  const double s = x / log_radius;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

}  // namespace

CalderonProfile CalderonProfile::bump(double log_radius, int table_size) {
  if (log_radius <= 0.0 || table_size < 8)
    throw std::invalid_argument("CalderonProfile::bump: bad parameters");
  // Normalize so the logarithmic integral is one.
  const double raw_mass = adaptive_simpson(
      [log_radius](double x) { return raw_bump(x, log_radius); }, -log_radius,
      log_radius, 1e-14);
  CalderonProfile p;
  p.log_lo_ = -log_radius;
  p.log_hi_ = log_radius;
  p.dx_ = (p.log_hi_ - p.log_lo_) / (table_size - 1);
  p.values_.resize(static_cast<std::size_t>(table_size));
  for (int i = 0; i < table_size; ++i)
    p.values_[static_cast<std::size_t>(i)] =
        raw_bump(p.log_lo_ + i * p.dx_, log_radius) / raw_mass;
  // Recorded normalization: logarithmic integral of the tabulated profile.
  double mass = 0.0;
  for (int i = 0; i + 1 < table_size; ++i)
    mass += 0.5 * p.dx_ *
            (p.values_[static_cast<std::size_t>(i)] +
             p.values_[static_cast<std::size_t>(i + 1)]);
  p.normalization_ = mass;
  return p;
}

double CalderonProfile::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  const double x = std::log(t);
  if (x <= log_lo_ || x >= log_hi_) return 0.0;
  const double u = (x - log_lo_) / dx_;
  const auto i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  if (i + 1 >= values_.size()) return values_.back();
  return (1.0 - frac) * values_[i] + frac * values_[i + 1];
}

Vec calderon_reproduce(const SpectralOperator& op, const CalderonProfile& prof,
                       double eps, const Vec& v, int nodes_per_decade) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("calderon_reproduce: eps must lie in (0,1)");
  if (!op.injective())
    throw std::domain_error("calderon_reproduce: S not injective");
  op.check_vector(v, "calderon_reproduce");
  if (nodes_per_decade < 2)
    throw std::invalid_argument("calderon_reproduce: need >= 2 nodes per decade");

  const double x_lo = std::log(eps);
  const double x_hi = -x_lo;
  const double decades = (x_hi - x_lo) / std::log(10.0);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * nodes_per_decade)));
  const double dx = (x_hi - x_lo) / n;

  Vec out(op.dim());
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    const double lambda = op.eigenvalue(i);
    // Composite trapezoid in log a of Phi(a * lambda).
    double acc = 0.5 * (prof(std::exp(x_lo) * lambda) + prof(std::exp(x_hi) * lambda));
    for (int k = 1; k < n; ++k) acc += prof(std::exp(x_lo + k * dx) * lambda);
    out[i] = acc * dx * v[i];
  }
  return out;
}

}  // namespace parasol
