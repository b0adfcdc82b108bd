#pragma once

#include <optional>

#include "parasol/cauchy.hpp"

namespace parasol {

enum class Direction { forward, backward };

// Causal family of solution operators on the grid.  Forward families hold
// Gamma(t_i, t_j) for i >= j (identity on the diagonal, zero above); backward
// families hold the final-value maps Gamma~(t_j, t_i) for j <= i.  Families
// are stored as composed one-step maps; dense materialization is optional and
// guarded by a size budget.
class PropagatorFamily {
 public:
  static PropagatorFamily from_steps(TimeGrid grid, OpPtr op, Direction dir,
                                     std::vector<Mat> steps);
  static PropagatorFamily from_blocks(TimeGrid grid, OpPtr op, Direction dir,
                                      std::vector<Mat> lower_blocks);

  const TimeGrid& grid() const { return grid_; }
  const OpPtr& op() const { return op_; }
  Direction direction() const { return dir_; }
  bool has_steps() const { return !steps_.empty(); }
  const std::vector<Mat>& steps() const { return steps_; }

  // Operator mapping data at time index `from` to the value at `to`;
  // zero when causality forbids it, identity on the diagonal.
  Mat block(int to, int from) const;

  // Dense materialization of all causal blocks (default budget 2e8 scalars).
  void materialize(std::size_t max_scalars = 200000000) const;
  bool materialized() const { return !blocks_.empty(); }

  // Largest block norm (Frobenius, an upper bound for the operator norm).
  double uniform_bound() const;

  // For half-line families: norm of the longest-time block per column start,
  // the decay diagnostic replacing a point at infinity.
  double tail_norm(int from) const;

  std::string to_text() const;  // structured text with per-block entries
  static PropagatorFamily from_text(const std::string& text, OpPtr op);

 private:
  PropagatorFamily(TimeGrid grid, OpPtr op, Direction dir)
      : grid_(grid), op_(std::move(op)), dir_(dir) {}

  int n() const { return grid_.n_steps(); }
  std::size_t tri_index(int to, int from) const;

  TimeGrid grid_;
  OpPtr op_;
  Direction dir_;
  std::vector<Mat> steps_;           // n one-step maps, when built from steps
  mutable std::vector<Mat> blocks_;  // causal blocks in triangular order
};

// Assembles the forward Green family of a coercive form family by composing
// the one-step solution maps of the homogeneous Cauchy problem.
PropagatorFamily assemble_green(const FormFamily& ff, const TimeGrid& grid,
                                SteppingScheme scheme = SteppingScheme::implicit_euler);

// Backward family of the adjoint problem on the reversed time direction;
// with matched schemes its blocks are exactly the adjoints of the forward
// ones.
PropagatorFamily assemble_backward(const FormFamily& ff, const TimeGrid& grid,
                                   SteppingScheme scheme = SteppingScheme::implicit_euler);

// max over grid triples j <= k <= i of || G(t_i,t_j) - G(t_i,t_k) G(t_k,t_j) ||.
// Structural zero for step-composed families; meaningful for loaded or
// perturbed ones.  Index count above max_points is strided down.
double chapman_kolmogorov_residual(const PropagatorFamily& pf, int max_points = 64);

// Largest blockwise adjointness defect || G(t_i,t_j)^* - G~(t_j,t_i) ||.
double adjointness_residual(const PropagatorFamily& forward,
                            const PropagatorFamily& backward);

// Representation of the weak solution from the two families:
//   u(t) = G(t,0) a + int G(t,s) S f2 ds + int G(t,s) S^beta g ds
//        + int G(t,s) h ds + Dirac terms,
// the f2/g integrals routed through the backward family in the weak sense,
// the h integral in the strong (quadrature) sense, Dirac masses atomically.
Trajectory represent(const PropagatorFamily& pf, const PropagatorFamily& pf_back,
                     const Vec& a, const SourceSpec& src);

// True iff the two families differ blockwise by at most tol.
bool fundamental_uniqueness_probe(const PropagatorFamily& pf1,
                                  const PropagatorFamily& pf2, double tol,
                                  int max_points = 64);

// Column estimate sum_i dt ||S^alpha G(t_i,t_j) a||^r <= C^r ||a||^r with
// alpha = 2/r: returns the measured constant C for the given column.
double column_lr_constant(const PropagatorFamily& pf, int from, const Vec& a,
                          double r);

}  // namespace parasol
