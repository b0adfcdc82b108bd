#pragma once

#include <functional>

#include "parasol/form_family.hpp"

namespace parasol {

struct OperatorWithForm {
  OpPtr op;
  FormFamily form;
};

// 1D Dirichlet setting on (0, L): S has eigenvalues k pi / L against the
// sine basis, and the form family is the mode-projection of
// int A(t,x) u'(x) conj(v'(x)) dx with oversampled composite Simpson
// quadrature.  The scalar coefficient must satisfy nu <= Re A and |A| <= M.
struct DirichletSpec {
  double length = kPi;
  int n_modes = 8;
  std::function<Complex(double t, double x)> coefficient =
      [](double, double) { return Complex(1.0, 0.0); };
  double M = 1.0;
  double nu = 1.0;
};

OperatorWithForm dirichlet_operator(const DirichletSpec& spec, const TimeGrid& grid);

// Periodic integro-differential setting: S is the fractional power |k|^gamma
// of the Laplacian on the mean-zero subspace of a periodic grid, and the
// form is the double sum of the kernel differences over grid pairs with
// periodic distance.  Measured comparability constants against ||S u||^2 are
// reported in the result.
struct FractionalKernelSpec {
  double gamma = 0.5;
  int n_grid = 16;  // periodic grid points on [0, 2 pi)
  std::function<Complex(double t, double x, double y)> kernel =
      [](double, double, double) { return Complex(1.0, 0.0); };
  double lambda_ell = 1.0;  // accretivity constant of the kernel
};

struct FractionalResult {
  OpPtr op;
  FormFamily form;
  double measured_nu = 0.0;  // min eigenvalue of the Hermitian part of A(t)
  double measured_M = 0.0;   // max singular value of A(t)
};

FractionalResult fractional_operator(const FractionalKernelSpec& spec,
                                     const TimeGrid& grid);

// Static form matrix of the kernel double sum in grid coordinates (scaled
// samples), before the mean-zero projection; used to check that constants
// are annihilated.
Mat fractional_grid_form(const FractionalKernelSpec& spec, double t);

// Weighted degenerate setting on a 1D cell grid: H = L^2_w with the diagonal
// mass matrix, T the cell-difference gradient, S from the generalized
// symmetric eigenproblem of T*T in the weighted inner product.  Cell
// averages of w and 1/w are carried exactly for the A2 computation.
struct WeightSpec {
  double x0 = 0.0;
  double x1 = 1.0;
  int n_cells = 64;
  std::vector<double> node_w;    // n_cells + 1 node samples, positive
  std::vector<double> avg_w;     // per-cell averages of w
  std::vector<double> avg_winv;  // per-cell averages of 1/w

  static WeightSpec constant(double c, double x0, double x1, int n_cells);
  static WeightSpec abs_power(double p, double x0, double x1, int n_cells);
  static WeightSpec exp_weight(double x0, double x1, int n_cells);
  static WeightSpec rough_seeded(std::uint64_t seed, double x0, double x1,
                                 int n_cells);

  void validate() const;
};

OperatorWithForm degenerate_operator(const WeightSpec& spec,
                                     const std::function<Complex(double t, double x)>& A,
                                     double M, double nu, const TimeGrid& grid);

// Muckenhoupt product sup over dyadic subintervals down to max_depth plus
// all grid-aligned windows of the finest dyadic length, via prefix sums of
// the exact cell averages.
double a2_constant(const WeightSpec& spec, int max_depth);

}  // namespace parasol
