#pragma once

#include <functional>

namespace parasol {

// Adaptive Simpson quadrature on [a, b] to the given absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 50);

// Integral over (0, infinity) of f(t) dt/t by adaptive Simpson in x = log t,
// truncated to [exp(x_lo), exp(x_hi)].
double log_scale_integral(const std::function<double(double)>& f, double x_lo,
                          double x_hi, double tol);

}  // namespace parasol
