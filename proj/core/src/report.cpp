#include "parasol/report.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace parasol {

Check equality_check(std::string name, std::string law, double lhs, double rhs,
                     double tolerance) {
  Check c;
  c.name = std::move(name);
  c.law = std::move(law);
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = std::abs(lhs - rhs);
  c.tolerance = tolerance;
  c.pass = c.residual <= tolerance;
  return c;
}

Check bound_check(std::string name, std::string law, double lhs, double rhs,
                  double tolerance) {
  Check c;
  c.name = std::move(name);
  c.law = std::move(law);
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = std::max(0.0, lhs - rhs);
  c.tolerance = tolerance;
  c.pass = c.residual <= tolerance;
  return c;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json(int indent) const {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name},
                           {"law", c.law},
                           {"lhs", c.lhs},
                           {"rhs_or_bound", c.rhs},
                           {"residual", c.residual},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
  }
  j["convergence"] = nlohmann::json::array();
  for (const auto& row : convergence)
    j["convergence"].push_back(
        {{"dt", row.dt}, {"residual", row.residual}, {"order", row.order}});
  return j.dump(indent);
}

}  // namespace parasol
