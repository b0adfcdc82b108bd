#pragma once

#include <map>
#include <string>
#include <vector>

namespace parasol {

// One verified inequality or identity.  residual is what is compared against
// tolerance: |lhs - rhs| for identities, max(0, lhs - rhs) for bounds.
struct Check {
  std::string name;
  std::string law;  // human-readable statement of what is being verified
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check equality_check(std::string name, std::string law, double lhs, double rhs,
                     double tolerance);
Check bound_check(std::string name, std::string law, double lhs, double rhs,
                  double tolerance);

struct ConvergenceRow {
  double dt = 0.0;
  double residual = 0.0;
  double order = 0.0;  // Richardson estimate against the next finer grid
};

struct Report {
  std::map<std::string, std::string> metadata;
  std::vector<Check> checks;
  std::vector<ConvergenceRow> convergence;

  void add(Check c) { checks.push_back(std::move(c)); }
  bool all_pass() const;
  std::string to_json(int indent = 2) const;
};

}  // namespace parasol
