#pragma once

#include "parasol/form_family.hpp"
#include "parasol/fourier.hpp"

namespace parasol {

// The variational parabolic system on the window, tested against
// (1 + delta H_t) v with delta = nu/(1+M).  The operator acts on
// frequency x eigen coefficient blocks: the time derivative is the diagonal
// multiplier i tau, the form couples frequencies through one FFT round trip
// per application.
class KaplanSystem {
 public:
  KaplanSystem(const FormFamily& ff, const TimeGrid& grid);

  double delta() const { return delta_; }

  // Modified operator (1 + delta H)^* (d/dt + B) on frequency coefficients.
  Mat apply(const Mat& x) const;
  // Conjugate transpose of apply in the flat L^2 pairing.
  Mat apply_adjoint(const Mat& x) const;
  // V0 Riesz weights per (frequency, eigen) entry: mu_i^2 + |tau_k|.
  const Eigen::ArrayXXd& riesz() const { return riesz_; }
  // (1 + delta H)^* applied to a plain density (builds the right hand side).
  Mat modified_rhs(const Mat& density_modes) const;

  // Worst defect of Re <Ku, u> >= delta ||u||_{V0}^2 over seeded random
  // mean-free probes; verified at construction.
  double coercivity_defect(int n_samples, std::uint64_t seed) const;

  const FrequencyGrid& frequencies() const { return freqs_; }

 private:
  Mat form_block(const Mat& x, bool adjoint_family) const;

  const FormFamily& ff_;
  TimeGrid grid_;
  FrequencyGrid freqs_;
  double delta_;
  Eigen::ArrayXXd riesz_;
};

struct KaplanStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double v0_norm = 0.0;
  double dual_norm = 0.0;  // decomposition upper bound of the source norm
};

// Solves d/dt u + B u = S f2 + S^beta g on the window through the hidden
// coercivity of the modified form, with a conjugate-gradient iteration on
// the normal equations in the V0 geometry, to relative residual 1e-10.
Trajectory kaplan_solve(const FormFamily& ff, const SourceSpec& src,
                        const TimeGrid& grid, KaplanStats* stats = nullptr,
                        double rel_tol = 1e-10);

// B_{V0}(u, v): the Hilbert-transform pairing of half derivatives plus the
// time integral of the forms.
Complex kaplan_form(const FormFamily& ff, const Trajectory& u,
                    const Trajectory& v);

// (||Seff u||^2_{L2} + ||D_t^{1/2} u||^2_{L2})^{1/2} with the family's
// effective spectrum.
double v0_norm(const FormFamily& ff, const Trajectory& u);

// Upper bound of the dual norm from the given decomposition
// ||f2||_{L2(H)} + ||D_t^{-1/2} S^beta g||_{L2(H)} (DC mode excluded).
double v0_dual_norm(const FormFamily& ff, const SourceSpec& src);

}  // namespace parasol
