#include "parasol/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "parasol/calderon.hpp"
#include "parasol/cauchy.hpp"
#include "parasol/fourier.hpp"
#include "parasol/identities.hpp"

namespace parasol {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument(std::string(where) + ": unknown key \"" +
                                  it.key() + "\"");
  }
}

Vec seeded_unit(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

// Gaussian bump (or its derivative, which integrates to zero while still
// decaying at the window edges) times a seeded direction; per_mode draws an
// independent amplitude and shift per eigencoordinate.
Trajectory bump_trajectory(const TimeGrid& grid, const OpPtr& op,
                           std::mt19937_64& rng, double scale, double center,
                           double width, bool mean_zero, bool per_mode,
                           bool derivative = false) {
  Mat values(grid.n_steps() + 1, op->dim());
  const auto shape = [width, derivative](double x) {
    const double g = std::exp(-x * x);
    return derivative ? -2.0 * x * g : g;
  };
  if (per_mode) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index c = 0; c < op->dim(); ++c) {
      const double shift = derivative ? 0.0 : 0.2 * width * normal(rng);
      const Complex amp(normal(rng), normal(rng));
      for (int k = 0; k <= grid.n_steps(); ++k) {
        const double t = grid.point(k);
        values(k, c) = scale * amp * shape((t - center - shift) / width);
      }
    }
  } else {
    const Vec dir = seeded_unit(op->dim(), rng);
    for (int k = 0; k <= grid.n_steps(); ++k) {
      const double t = grid.point(k);
      values.row(k) = (scale * shape((t - center) / width) * dir).transpose();
    }
  }
  Trajectory tr(grid, op, std::move(values));
  if (mean_zero) tr = tr.mean_free();
  if (grid.kind() == GridKind::full_line_window)
    tr.values().row(grid.n_steps()) = tr.values().row(0);
  return tr;
}

std::string hash_hex(const std::string& text) {
  std::ostringstream os;
  os << std::hex << std::hash<std::string>{}(text);
  return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  check_keys(j, {"scenario", "seed", "threads", "operator", "form", "grid",
                 "source", "tolerances", "output"},
             "config");
  RunConfig cfg;
  cfg.scenario = j.at("scenario").get<std::string>();
  if (cfg.scenario != "heat" && cfg.scenario != "parabolic" &&
      cfg.scenario != "propagator" && cfg.scenario != "verify" &&
      cfg.scenario != "constants")
    throw std::invalid_argument("config: unknown scenario " + cfg.scenario);
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.threads = j.value("threads", 1);
  if (const char* env = std::getenv("PARASOL_THREADS")) cfg.threads = std::atoi(env);
  cfg.threads = std::max(1, cfg.threads);
  cfg.raw = j.dump();
  if (j.contains("operator")) cfg.operator_spec = j.at("operator").dump();
  if (j.contains("form")) cfg.form_spec = j.at("form").dump();
  if (j.contains("grid")) cfg.grid_spec = j.at("grid").dump();
  if (j.contains("source")) cfg.source_spec = j.at("source").dump();
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    check_keys(t,
               {"heat_agreement_rel", "energy_residual_dt_factor",
                "represent_dt_factor"},
               "tolerances");
    cfg.tol.heat_agreement_rel =
        t.value("heat_agreement_rel", cfg.tol.heat_agreement_rel);
    cfg.tol.energy_residual_dt_factor =
        t.value("energy_residual_dt_factor", cfg.tol.energy_residual_dt_factor);
    cfg.tol.represent_dt_factor =
        t.value("represent_dt_factor", cfg.tol.represent_dt_factor);
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, {"dir"}, "output");
    cfg.out_dir = o.value("dir", std::string());
  }
  return cfg;
}

OpPtr build_operator(const std::string& json_text, std::uint64_t seed) {
  const auto j = json::parse(json_text);
  if (j.contains("kind")) {
    check_keys(j, {"kind", "dim", "lambda_min", "lambda_max", "zero_modes"},
               "operator");
    if (j.at("kind").get<std::string>() != "random")
      throw std::invalid_argument("operator: unknown kind");
    const int dim = j.value("dim", 6);
    const double lo = j.value("lambda_min", 0.5);
    const double hi = j.value("lambda_max", 4.0);
    const int zeros = j.value("zero_modes", 0);
    std::mt19937_64 rng(seed ^ 0x5eed01ULL);
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<double> evs;
    for (int i = 0; i < zeros; ++i) evs.push_back(0.0);
    for (int i = zeros; i < dim; ++i) evs.push_back(uni(rng));
    std::sort(evs.begin(), evs.end());
    RealVec lambda(dim);
    for (int i = 0; i < dim; ++i) lambda[i] = evs[static_cast<std::size_t>(i)];
    return std::make_shared<SpectralOperator>(lambda);
  }
  check_keys(j, {"eigenvalues", "basis", "matrix"}, "operator");
  return std::make_shared<SpectralOperator>(load_operator(json_text));
}

TimeGrid build_grid(const std::string& json_text) {
  const auto j = json::parse(json_text);
  check_keys(j, {"t0", "t1", "n_steps", "kind"}, "grid");
  const auto kind_str = j.value("kind", std::string("bounded"));
  GridKind kind;
  if (kind_str == "bounded")
    kind = GridKind::bounded;
  else if (kind_str == "half_line")
    kind = GridKind::half_line;
  else if (kind_str == "full_line_window")
    kind = GridKind::full_line_window;
  else
    throw std::invalid_argument("grid: unknown kind " + kind_str);
  return TimeGrid(j.value("t0", 0.0), j.value("t1", 1.0), j.value("n_steps", 64),
                  kind);
}

FormFamily build_form(const std::string& json_text, OpPtr op, const TimeGrid& grid) {
  const auto j = json::parse(json_text);
  check_keys(j, {"A", "M", "nu", "kappa", "lambda"}, "form");
  return load_form_family(json_text, std::move(op), grid);
}

SourceSpec build_source(const std::string& json_text, const TimeGrid& grid,
                        const OpPtr& op, std::uint64_t seed) {
  const auto j = json::parse(json_text);
  check_keys(j, {"f2", "g", "h", "diracs", "initial"}, "source");
  SourceSpec src(grid, op);
  std::mt19937_64 rng(seed ^ 0xb00f5ULL);
  const double center = 0.5 * (grid.t0() + grid.t1());
  const double width = grid.period() / 10.0;
  const auto part = [&](const json& p) {
    check_keys(p, {"kind", "scale", "center", "width", "mean_zero", "rho"},
               "source part");
    const auto kind = p.value("kind", std::string("bump"));
    const double scale = p.value("scale", 1.0);
    if (kind == "zero") return Trajectory::zero(grid, op);
    const bool per_mode = kind == "random_bump" || kind == "random_dbump";
    const bool derivative = kind == "dbump" || kind == "random_dbump";
    if (kind != "bump" && kind != "random_bump" && kind != "dbump" &&
        kind != "random_dbump")
      throw std::invalid_argument("source: unknown part kind " + kind);
    return bump_trajectory(grid, op, rng, scale, p.value("center", center),
                           p.value("width", width), p.value("mean_zero", false),
                           per_mode, derivative);
  };
  if (j.contains("f2")) src.set_f2(part(j.at("f2")));
  if (j.contains("g")) {
    const double rho = j.at("g").value("rho", 4.0);
    src.set_g(part(j.at("g")), rho);
  }
  if (j.contains("h")) src.set_h(part(j.at("h")));
  if (j.contains("diracs")) {
    for (const auto& d : j.at("diracs")) {
      check_keys(d, {"time", "scale"}, "dirac");
      src.add_dirac(d.at("time").get<double>(),
                    d.value("scale", 1.0) * seeded_unit(op->dim(), rng));
    }
  }
  return src;
}

namespace {

Vec initial_from_source(const std::string& source_spec, const OpPtr& op,
                        std::uint64_t seed) {
  if (source_spec.empty()) return Vec::Zero(op->dim());
  const auto j = json::parse(source_spec);
  if (!j.contains("initial")) return Vec::Zero(op->dim());
  const auto& p = j.at("initial");
  check_keys(p, {"scale"}, "initial");
  std::mt19937_64 rng(seed ^ 0x1417aULL);
  return p.value("scale", 1.0) * seeded_unit(op->dim(), rng);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

Report constants_report() {
  Report rep;
  const auto c0 = heat_constants(0.0);
  const auto c1 = heat_constants(1.0);
  const auto cm = heat_constants(-0.5);
  rep.add(equality_check("constant_cprime_0",
                         "sharp energy multiplier at the middle of the scale "
                         "equals 1/sqrt(2)",
                         c0.Cprime, std::sqrt(0.5), 1e-12));
  rep.add(equality_check("constant_cprime_1",
                         "energy multiplier at the top of the scale equals 1",
                         c1.Cprime, 1.0, 1e-12));
  const double target = 1.0 / (4.0 * std::sqrt(2.0));
  rep.add(equality_check("constant_c_minus_half_sq",
                         "quadrature of the resolvent moment integral at the "
                         "midpoint of the dual scale",
                         *cm.C * *cm.C, target, 1e-6 * target));
  for (double alpha : {-1.0, -0.75, -0.25, -0.1}) {
    const auto hc = heat_constants(alpha);
    rep.metadata["C(" + std::to_string(alpha) + ")"] = std::to_string(*hc.C);
  }
  return rep;
}

Report heat_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const OpPtr op = build_operator(cfg.operator_spec, cfg.seed);
  const TimeGrid grid = build_grid(cfg.grid_spec);
  const SourceSpec src = build_source(cfg.source_spec, grid, op, cfg.seed);
  const Trajectory ud = duhamel_solve(op, src, grid);
  FourierDiagnostics diag;
  const Trajectory uf = fourier_heat_solve(op, src, grid, &diag);
  Report rep = apriori_report(op, src, ud);
  Trajectory diff = ud;
  diff.values() -= uf.values();
  const double denom = std::max(uf.l2_norm(1.0), 1e-300);
  rep.add(bound_check("heat_duhamel_fourier_agreement",
                      "the stepped and the resolvent solutions of the heat "
                      "flow coincide in the energy norm",
                      diff.l2_norm(1.0) / denom, 0.0,
                      cfg.tol.heat_agreement_rel));
  rep.metadata["edge_decay_ok"] = diag.edge_decay_ok ? "true" : "false";
  rep.metadata["source_edge_ratio"] = std::to_string(diag.source_edge_ratio);
  if (!out_dir.empty()) {
    write_file(std::filesystem::path(out_dir) / "u_duhamel.csv",
               trajectory_to_csv(ud));
    write_file(std::filesystem::path(out_dir) / "u_fourier.csv",
               trajectory_to_csv(uf));
  }
  return rep;
}

Report parabolic_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const OpPtr op = build_operator(cfg.operator_spec, cfg.seed);
  const TimeGrid grid = build_grid(cfg.grid_spec);
  const FormFamily ff = build_form(cfg.form_spec, op, grid);
  const SourceSpec src = build_source(cfg.source_spec, grid, op, cfg.seed);
  const Vec a = initial_from_source(cfg.source_spec, op, cfg.seed);
  const Trajectory u = cauchy_step_solve(ff, a, src, grid);
  Report rep = energy_report(ff, u, src);
  Report ell = ff.ellipticity_report(64, cfg.seed);
  for (auto& c : ell.checks) rep.add(std::move(c));
  if (!out_dir.empty())
    write_file(std::filesystem::path(out_dir) / "u.csv", trajectory_to_csv(u));
  return rep;
}

Report propagator_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const OpPtr op = build_operator(cfg.operator_spec, cfg.seed);
  const TimeGrid grid = build_grid(cfg.grid_spec);
  const FormFamily ff = build_form(cfg.form_spec, op, grid);
  const PropagatorFamily green = assemble_green(ff, grid);
  const PropagatorFamily back = assemble_backward(ff, grid);
  Report rep;
  rep.add(bound_check("chapman_kolmogorov",
                      "composition through any intermediate time reproduces "
                      "the block",
                      chapman_kolmogorov_residual(green), 0.0, 1e-12));
  rep.add(bound_check("green_adjointness",
                      "forward and backward families are blockwise adjoint",
                      adjointness_residual(green, back), 0.0, 1e-12));
  rep.metadata["uniform_bound"] = std::to_string(green.uniform_bound());
  if (ff.kappa() == 0.0 && ff.effective_injective()) {
    const Report shift = exponential_shift_check(ff, 0.7, grid);
    for (const auto& c : shift.checks) rep.checks.push_back(c);
  }
  if (grid.kind() == GridKind::half_line)
    rep.metadata["tail_norm"] = std::to_string(green.tail_norm(0));
  if (!out_dir.empty() && grid.n_steps() <= 64)
    write_file(std::filesystem::path(out_dir) / "propagator.txt", green.to_text());
  return rep;
}

}  // namespace

Report run_scenario(const RunConfig& cfg, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  Report rep;
  if (cfg.scenario == "constants")
    rep = constants_report();
  else if (cfg.scenario == "heat")
    rep = heat_scenario(cfg, out_dir);
  else if (cfg.scenario == "parabolic")
    rep = parabolic_scenario(cfg, out_dir);
  else if (cfg.scenario == "propagator")
    rep = propagator_scenario(cfg, out_dir);
  else
    rep = verify_suite(cfg);
  rep.metadata["config_hash"] = hash_hex(cfg.raw);
  rep.metadata["version"] = "0.1.0";
  rep.metadata["scenario"] = cfg.scenario;
  rep.metadata["seed"] = std::to_string(cfg.seed);
  const auto stop = std::chrono::steady_clock::now();
  rep.metadata["timing_ms"] = std::to_string(
      std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count());
  if (!out_dir.empty())
    write_file(std::filesystem::path(out_dir) / "report.json", rep.to_json());
  return rep;
}

namespace {

struct VerifyCell {
  std::string name;
  std::function<Report()> run;
};

// A bounded-grid battery for one operator/form pair: solver invariants,
// propagator identities, and the representation of mixed sources.
Report matrix_cell(const OpPtr& op, const std::string& form_kind,
                   const TimeGrid& grid, std::uint64_t seed,
                   const Tolerances& tol) {
  Report rep;
  // Non-injective operators on half-line grids run through the unit shift.
  const double lambda_shift =
      (!op->injective() && grid.kind() == GridKind::half_line) ? 1.0 : 0.0;
  FormFamily ff = [&]() {
    if (form_kind == "identity") return FormFamily::identity(op, grid);
    if (form_kind == "rotation")
      return FormFamily::rotation(op, grid, 2.0, 0.4, seed);
    return FormFamily::random_accretive(op, grid, 2.0, 0.5, seed);
  }()
                      .with_shifts(0.0, lambda_shift);

  std::mt19937_64 rng(seed);
  const Eigen::Index dim = op->dim();
  const double dt = grid.dt();

  {
    Report ell = ff.ellipticity_report(64, seed);
    for (auto& c : ell.checks) rep.add(std::move(c));
  }

  // Zero data stays zero.
  const Trajectory uzero = cauchy_step_solve(ff, Vec::Zero(dim), grid);
  rep.add(bound_check("uniqueness_zero_data",
                      "zero data produces the zero solution", uzero.sup_norm(),
                      0.0, 1e-12));

  // Discrete dissipativity of the homogeneous flow.
  const Vec a = seeded_unit(dim, rng);
  const Trajectory uhom = cauchy_step_solve(ff, a, grid);
  double worst_growth = 0.0;
  for (int k = 0; k + 1 <= grid.n_steps(); ++k)
    worst_growth = std::max(
        worst_growth, uhom.row(k + 1).norm() - uhom.row(k).norm());
  rep.add(bound_check("discrete_dissipativity",
                      "the homogeneous flow is a step-wise contraction",
                      worst_growth, 0.0, 1e-13));

  // Energy equality for a mixed smooth source.
  SourceSpec src(grid, op);
  src.set_f2(bump_trajectory(grid, op, rng, 0.7, 0.4 * grid.t1(), grid.period() / 6,
                             false, false));
  src.set_g(bump_trajectory(grid, op, rng, 0.5, 0.6 * grid.t1(), grid.period() / 7,
                            false, false),
            4.0);
  src.set_h(bump_trajectory(grid, op, rng, 0.4, 0.5 * grid.t1(), grid.period() / 5,
                            false, false));
  const Trajectory u = cauchy_step_solve(ff, a, src, grid);
  const double scale = std::max(1.0, u.sup_norm() * u.sup_norm());
  const double res_base = energy_equality_residual(ff, u, src);
  rep.add(bound_check("energy_equality",
                      "absolute continuity of the squared norm along the flow",
                      res_base, 0.0, tol.energy_residual_dt_factor * dt * scale));
  {
    // Refinement order of the energy residual.
    Report er = energy_report(ff, u, src);
    const double order = er.convergence.front().order;
    rep.convergence = er.convergence;
    rep.add(bound_check("energy_refinement_order",
                        "energy residual decays with order in [0.8, 2.2]",
                        std::abs(order - 1.5), 0.0, 0.7 + 1e-9));
  }

  // Propagator identities.
  const PropagatorFamily green = assemble_green(ff, grid);
  const PropagatorFamily back = assemble_backward(ff, grid);
  rep.add(bound_check("chapman_kolmogorov",
                      "composition through any intermediate time reproduces "
                      "the block",
                      chapman_kolmogorov_residual(green), 0.0, 1e-12));
  rep.add(bound_check("green_adjointness",
                      "forward and backward families are blockwise adjoint",
                      adjointness_residual(green, back), 0.0, 1e-12));
  if (ff.kappa() == 0.0) {
    // Contraction in operator norm: per-step suffices, products inherit it.
    double step_norm = 0.0;
    for (const auto& p : green.steps())
      step_norm = std::max(step_norm, p.operatorNorm());
    rep.add(bound_check("green_contraction",
                        "accretive families yield contractive solution maps",
                        step_norm, 1.0, 1e-12));
    if (ff.effective_injective()) {
      const Report shift = exponential_shift_check(ff, 0.7, grid);
      for (const auto& c : shift.checks) rep.checks.push_back(c);
    }
  }
  rep.metadata["uniform_bound"] = std::to_string(green.uniform_bound());
  rep.metadata["column_l4_constant"] =
      std::to_string(column_lr_constant(green, 0, seeded_unit(dim, rng), 4.0));

  // Representation with a Dirac mass added.
  SourceSpec mixed = src;
  mixed.add_dirac(grid.point(grid.n_steps() / 3), 0.8 * seeded_unit(dim, rng));
  const Trajectory udirect = cauchy_step_solve(ff, a, mixed, grid);
  const Trajectory urep = represent(green, back, a, mixed);
  Mat diffv = urep.values() - udirect.values();
  double num = 0.0;
  for (Eigen::Index r = 0; r < diffv.rows(); ++r)
    num = std::max(num, diffv.row(r).norm());
  const double den = std::max(udirect.sup_norm(), 1e-300);
  rep.add(bound_check("representation_vs_direct",
                      "the propagator representation reproduces the direct "
                      "solve",
                      num / den, 0.0, tol.represent_dt_factor * dt));
  return rep;
}

Report kaplan_cell(const OpPtr& op, const std::string& form_kind,
                   std::uint64_t seed) {
  Report rep;
  const TimeGrid window(-8.0, 8.0, 256, GridKind::full_line_window);
  FormFamily ff = [&]() {
    if (form_kind == "identity") return FormFamily::identity(op, window);
    if (form_kind == "rotation")
      return FormFamily::rotation(op, window, 2.0, 0.4, seed);
    return FormFamily::random_accretive(op, window, 2.0, 0.5, seed);
  }();
  std::mt19937_64 rng(seed);
  const double delta = ff.bound_nu() / (1.0 + ff.bound_M());

  // Hidden coercivity of the modified form on random mean-zero trajectories.
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory u = bump_trajectory(window, op, rng, 1.0, -2.0 + 0.02 * trial,
                                   2.0, true, true);
    const Trajectory hu = hilbert_transform(u);
    Trajectory testv = u;
    testv.values() += delta * hu.values();
    const double lhs = kaplan_form(ff, u, testv).real();
    const double v0 = v0_norm(ff, u);
    worst = std::max(worst, delta * v0 * v0 - lhs);
  }
  rep.add(bound_check("kaplan_coercivity",
                      "hidden coercivity of the variational form tested "
                      "against (1 + delta H) u",
                      worst, 0.0, 1e-8));

  // Solution bound on seeded sources.
  const double bound = (1.0 + ff.bound_M()) / ff.bound_nu() *
                       std::sqrt(1.0 + delta * delta);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SourceSpec src(window, op);
    src.set_f2(bump_trajectory(window, op, rng, 1.0, -1.0, 1.5, true, true));
    if (trial % 2)
      src.set_g(bump_trajectory(window, op, rng, 0.6, 1.0, 1.5, true, true), 4.0);
    KaplanStats stats;
    kaplan_solve(ff, src, window, &stats);
    if (stats.dual_norm > 0)
      worst_ratio = std::max(worst_ratio, stats.v0_norm / stats.dual_norm);
  }
  rep.add(bound_check("kaplan_solution_bound",
                      "variational solution norm against the dual norm of "
                      "the data",
                      worst_ratio, bound, 1e-8));
  rep.metadata["kaplan_bound"] = std::to_string(bound);

  if (form_kind == "identity") {
    // The variational and the resolvent solutions agree for the heat flow.
    SourceSpec src(window, op);
    src.set_f2(bump_trajectory(window, op, rng, 1.0, 0.0, 1.5, true, true));
    const Trajectory uk = kaplan_solve(ff, src, window);
    const Trajectory uf = fourier_heat_solve(op, src, window);
    Mat diff = uk.values() - uf.values();
    const double rel =
        std::sqrt(diff.squaredNorm() / std::max(uf.values().squaredNorm(), 1e-300));
    rep.add(bound_check("kaplan_vs_fourier",
                        "uniqueness: the variational and resolvent heat "
                        "solutions coincide",
                        rel, 0.0, 1e-6));
  }
  return rep;
}

Report heat_cell(const OpPtr& base, std::uint64_t seed) {
  Report rep;
  // Shift the spectrum off zero so the periodic window wrap stays below the
  // agreement tolerance.
  const OpPtr op = std::make_shared<SpectralOperator>(base->shift(1.0));
  const TimeGrid window(-12.0, 12.0, 512, GridKind::full_line_window);
  std::mt19937_64 rng(seed);
  SourceSpec src(window, op);
  src.set_h(bump_trajectory(window, op, rng, 1.0, 0.0, 1.2, false, true));
  src.set_f2(bump_trajectory(window, op, rng, 0.6, -1.0, 1.5, false, true));
  // DC-free g part: a derivative bump centered on a grid point decays at
  // the edges and cancels its own mean exactly.
  src.set_g(bump_trajectory(window, op, rng, 0.5, 0.0, 1.3, false, false,
                            /*derivative=*/true),
            4.0);

  const Trajectory ud = duhamel_solve(op, src, window);
  const Trajectory uf = fourier_heat_solve(op, src, window);
  const Trajectory diff(window, op, ud.values() - uf.values());
  rep.add(bound_check("heat_uniqueness_surrogate",
                      "stepped and resolvent heat solutions agree in energy",
                      diff.l2_norm(1.0) / std::max(uf.l2_norm(1.0), 1e-300),
                      0.0, 1e-3));
  Report apriori = apriori_report(op, src, ud);
  for (auto& c : apriori.checks) rep.add(std::move(c));

  // Embedding battery on random trajectories.
  double worst_moment = 0.0, worst_mixed = 0.0, worst_plancherel = 0.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec v = seeded_unit(op->dim(), rng);
    // Moment inequality along a random exponent triple.
    const double alpha = -0.5 + 1.5 * std::abs(normal(rng));
    const double beta = alpha + 0.5 + std::abs(normal(rng));
    const double theta = 0.3;
    if (op->injective()) {
      const double gamma = theta * alpha + (1 - theta) * beta;
      const double lhs = op->homogeneous_norm(gamma, v);
      const double rhs = std::pow(op->homogeneous_norm(alpha, v), theta) *
                         std::pow(op->homogeneous_norm(beta, v), 1 - theta);
      worst_moment = std::max(worst_moment, lhs - rhs);
    }
    Trajectory tr = bump_trajectory(window, op, rng, 1.0, -4.0 + 0.08 * trial,
                                    1.0 + 0.01 * trial, false, true);
    const double lhs = tr.mixed_norm(4.0, 0.5);
    const double rhs = std::pow(tr.l2_norm(1.0), 0.5) *
                       std::pow(tr.sup_norm(), 0.5);
    worst_mixed = std::max(worst_mixed, lhs - rhs);
    worst_plancherel =
        std::max(worst_plancherel, std::abs(plancherel_ratio(tr) - 1.0));
  }
  rep.add(bound_check("moment_inequality",
                      "log-convexity of the homogeneous norms", worst_moment,
                      0.0, 1e-12));
  rep.add(bound_check("mixed_norm_embedding",
                      "interpolation bound between energy and uniform norms",
                      worst_mixed, 0.0, 1e-12));
  rep.add(bound_check("plancherel", "the window transform is unitary",
                      worst_plancherel, 0.0, 1e-10));
  return rep;
}

}  // namespace

Report verify_suite(const RunConfig& cfg) {
  std::vector<VerifyCell> cells;
  struct NamedOp {
    std::string name;
    OpPtr op;
  };
  std::vector<NamedOp> ops;
  {
    RealVec a(6);
    a << 0.5, 0.9, 1.5, 2.2, 3.0, 4.0;
    ops.push_back({"opA", std::make_shared<SpectralOperator>(a)});
    std::mt19937_64 rng(cfg.seed ^ 0xabcdULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat g(5, 5);
    for (Eigen::Index r = 0; r < 5; ++r)
      for (Eigen::Index c = 0; c < 5; ++c) g(r, c) = Complex(normal(rng), normal(rng));
    const Mat h = g.adjoint() * g / 5.0 + 0.3 * Mat::Identity(5, 5);
    ops.push_back({"opB", std::make_shared<SpectralOperator>(
                              SpectralOperator::from_hermitian(h))});
    RealVec c(5);
    c << 0.0, 0.0, 0.8, 1.6, 2.4;
    ops.push_back({"opC", std::make_shared<SpectralOperator>(c)});
  }
  const std::vector<std::string> forms = {"identity", "rotation", "random_accretive"};
  const std::vector<std::pair<std::string, TimeGrid>> grids = {
      {"bounded", TimeGrid(0.0, 1.0, 64, GridKind::bounded)},
      {"half_line", TimeGrid(0.0, 2.0, 96, GridKind::half_line)}};

  std::uint64_t salt = 17;
  const Tolerances tol = cfg.tol;
  for (const auto& nop : ops)
    for (const auto& fk : forms)
      for (const auto& [gname, grid] : grids) {
        const std::string name = "cell_" + nop.name + "_" + fk + "_" + gname;
        const std::uint64_t seed = cfg.seed + (salt += 131);
        const OpPtr op = nop.op;
        cells.push_back({name, [op, fk, grid, seed, tol] {
                           return matrix_cell(op, fk, grid, seed, tol);
                         }});
      }
  for (const auto& fk : forms) {
    const std::string name = "kaplan_" + fk;
    const std::uint64_t seed = cfg.seed + (salt += 131);
    const OpPtr op = ops[0].op;
    cells.push_back({name, [op, fk, seed] { return kaplan_cell(op, fk, seed); }});
  }
  for (const auto& nop : {ops[0], ops[1]}) {
    const std::string name = "heat_" + nop.name;
    const std::uint64_t seed = cfg.seed + (salt += 131);
    const OpPtr op = nop.op;
    cells.push_back({name, [op, seed] { return heat_cell(op, seed); }});
  }

  // Worker pool; deterministic assembly order.
  std::vector<Report> results(cells.size());
  std::atomic<std::size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(cells.size())));
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = cells[i].run();
      } catch (const std::exception& e) {
        Report r;
        r.add(bound_check("exception", e.what(), 1.0, 0.0, 0.0));
        results[i] = std::move(r);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Report merged;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (auto& c : results[i].checks) {
      c.name = cells[i].name + "/" + c.name;
      merged.add(std::move(c));
    }
    for (const auto& row : results[i].convergence) merged.convergence.push_back(row);
    for (const auto& [k, v] : results[i].metadata)
      merged.metadata[cells[i].name + "/" + k] = v;
  }
  return merged;
}

int exit_code_for(const Report& rep) { return rep.all_pass() ? 0 : 1; }

}  // namespace parasol
