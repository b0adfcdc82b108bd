#include "parasol/source_spec.hpp"

#include <cmath>

namespace parasol {

namespace {

void check_part(const TimeGrid& grid, const OpPtr& op, const Trajectory& part,
                const char* name) {
  if (!(part.grid() == grid))
    throw contract_error(std::string("SourceSpec: ") + name + " on a different grid");
  if (part.op()->dim() != op->dim())
    throw contract_error(std::string("SourceSpec: ") + name +
                         " over a different operator");
}

}  // namespace

SourceSpec& SourceSpec::set_f2(Trajectory f2) {
  check_part(grid_, op_, f2, "f2");
  f2_ = std::move(f2);
  return *this;
}

SourceSpec& SourceSpec::set_g(Trajectory g, double rho) {
  check_part(grid_, op_, g, "g");
  if (!(rho > 2.0))
    throw std::invalid_argument("SourceSpec::set_g: rho must lie in (2, inf]");
  g_ = std::move(g);
  rho_ = rho;
  beta_ = std::isinf(rho) ? 0.0 : 2.0 / rho;
  return *this;
}

SourceSpec& SourceSpec::set_h(Trajectory h) {
  check_part(grid_, op_, h, "h");
  h_ = std::move(h);
  return *this;
}

SourceSpec& SourceSpec::add_dirac(double time, Vec amplitude) {
  if (amplitude.size() != op_->dim())
    throw std::invalid_argument("SourceSpec::add_dirac: amplitude length mismatch");
  if (time < grid_.t0() || time > grid_.t1())
    throw std::invalid_argument("SourceSpec::add_dirac: time outside the grid");
  diracs_.push_back({time, std::move(amplitude)});
  return *this;
}

Vec SourceSpec::density_at(int k) const {
  Vec out = Vec::Zero(op_->dim());
  if (f2_) out += op_->fractional_power(1.0, f2_->row(k));
  if (g_) out += op_->fractional_power(beta_, g_->row(k));
  if (h_) out += h_->row(k);
  return out;
}

void SourceSpec::validate() const {
  if (empty()) throw std::invalid_argument("SourceSpec: no part present");
}

}  // namespace parasol
