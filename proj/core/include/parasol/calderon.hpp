#pragma once

#include "parasol/spectral_operator.hpp"
#include "parasol/types.hpp"

#include <vector>

namespace parasol {

// Tabulated profile for the reproducing integral: a smooth function with
// compact support away from 0 and infinity, normalized so that its
// logarithmic integral equals one.  Values are stored on a uniform grid in
// log t and interpolated linearly there.
class CalderonProfile {
 public:
  // Smooth bump exp(-1/(1-s^2)), s = log(t)/log_radius, supported on
  // [exp(-log_radius), exp(log_radius)], normalized by adaptive quadrature.
  static CalderonProfile bump(double log_radius = 2.302585092994046 /* log 10 */,
                              int table_size = 4096);

  double operator()(double t) const;  // 0 outside the support
  double normalization() const { return normalization_; }
  double support_log_lo() const { return log_lo_; }
  double support_log_hi() const { return log_hi_; }

 private:
  CalderonProfile() = default;
  double log_lo_ = 0, log_hi_ = 0, dx_ = 0;
  std::vector<double> values_;
  double normalization_ = 0;
};

// Truncated reproducing integral of Phi(aS) v da/a over [eps, 1/eps],
// evaluated per eigenmode with composite trapezoid quadrature on a log-spaced
// grid (default 512 nodes per decade).  For injective S this converges to v
// as eps -> 0.
Vec calderon_reproduce(const SpectralOperator& op, const CalderonProfile& prof,
                       double eps, const Vec& v, int nodes_per_decade = 512);

}  // namespace parasol
