// parasol: config-driven runner for the spectral parabolic toolbox.
//
// Subcommands: solve, propagator, verify, constants.  Exit codes: 0 all
// checks pass, 1 a check failed, 2 config error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "parasol/harness.hpp"
#include "parasol/types.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts* opts, bool config_required) {
  auto* c = cmd->add_option("--config", opts->config_path, "path to the JSON config");
  if (config_required) c->required();
  cmd->add_option("--out", opts->out_dir, "output directory for artifacts");
  cmd->add_option("--seed", opts->seed, "override the config seed");
  cmd->add_option("--threads", opts->threads, "override the worker count");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void fail(const char* kind, const std::string& message, int code) {
  nlohmann::json j{{"error", message}, {"kind", kind}};
  std::cerr << j.dump() << "\n";
  std::exit(code);
}

int run(const std::string& subcommand, const CommonOpts& opts) {
  parasol::RunConfig cfg;
  try {
    std::string text = opts.config_path.empty()
                           ? std::string(R"({"scenario":"constants"})")
                           : read_file(opts.config_path);
    cfg = parasol::parse_config(text);
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.threads > 0) cfg.threads = opts.threads;
    const bool ok =
        (subcommand == "solve" &&
         (cfg.scenario == "heat" || cfg.scenario == "parabolic")) ||
        (subcommand == cfg.scenario);
    if (!ok)
      throw std::invalid_argument("config scenario \"" + cfg.scenario +
                                  "\" does not match subcommand " + subcommand);
  } catch (const std::exception& e) {
    fail("config", e.what(), 2);
  }

  parasol::Report rep;
  try {
    const std::string out = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
    rep = parasol::run_scenario(cfg, out);
  } catch (const parasol::numeric_error& e) {
    fail("numeric", e.what(), 3);
  } catch (const std::exception& e) {
    fail("config", e.what(), 2);
  }
  for (const auto& c : rep.checks)
    std::printf("%s  %-48s residual=%.3e tol=%.3e\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.residual, c.tolerance);
  if (opts.out_dir.empty()) std::cout << rep.to_json() << "\n";
  return parasol::exit_code_for(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral surrogates for non-autonomous parabolic problems"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto* solve = app.add_subcommand("solve", "run a heat or parabolic solve");
  add_common(solve, &opts, /*config_required=*/true);
  auto* prop = app.add_subcommand("propagator", "assemble and check propagators");
  add_common(prop, &opts, /*config_required=*/true);
  auto* verify = app.add_subcommand("verify", "run the full invariant battery");
  add_common(verify, &opts, /*config_required=*/true);
  auto* constants = app.add_subcommand("constants", "evaluate the sharp constants");
  add_common(constants, &opts, /*config_required=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  for (auto* cmd : {solve, prop, verify, constants})
    if (cmd->parsed()) return run(cmd->get_name(), opts);
  return 2;
}
