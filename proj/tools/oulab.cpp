// oulab: command line front end for the experiment runner.

#include "oulab/registry.hpp"
#include "oulab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string out;
};

void print_summary(const oulab::RunReport& r) {
  for (const auto& c : r.checks)
    std::cout << (c.pass ? "ok   " : (c.statistical && !r.statistical_enforced ? "warn " : "FAIL ")) << c.name
              << "  lhs=" << c.lhs << " rhs=" << c.rhs << " tol=" << c.tolerance << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << r.suite << ": " << r.checks.size() << " checks, " << (r.all_pass() ? "pass" : "fail")
            << " (config " << r.config_hash << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized Ornstein-Uhlenbeck Dirichlet problems: Galerkin solves, Monte Carlo, surface measures"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "override mc.seed");
  app.add_option("--jobs", g.jobs, "worker threads (0: config)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "output directory for report.json and CSV files");

  auto* solve = app.add_subcommand("solve", "penalized Galerkin solves along the eps ladder");
  auto* semigroup = app.add_subcommand("semigroup", "stopped and penalized semigroups on common paths");
  auto* surface = app.add_subcommand("surface", "pushforward identities, density curve, surface integral");
  auto* validate = app.add_subcommand("validate", "run every suite (validate-all)");
  auto* list = app.add_subcommand("list", "print the test function registry");

  std::string g_variant;
  double r = 0.0;
  std::string f;
  double shells = -1.0;
  std::size_t paths = 0;
  auto* r_opt = surface->add_option("--r", r, "level r");
  surface->add_option("--g-variant", g_variant, "domain | half_space | quadratic | ball")
      ->check(CLI::IsMember({"domain", "half_space", "quadratic", "ball"}));
  surface->add_option("--f", f, "named integrand from the registry");
  surface->add_option("--shells", shells, "largest shell half-width (0: from the samples)")->check(CLI::NonNegativeNumber);
  surface->add_option("--paths", paths, "samples");
  surface->add_option("--seed", seed, "override mc.seed");

  bool strict = false;
  validate->add_flag("--strict", strict, "statistical checks fail the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (list->parsed()) {
    for (const auto& i : oulab::list_testfunctions())
      std::cout << i.name << "\t" << i.role << "\t" << i.description << "\n";
    return 0;
  }

  try {
    oulab::ExperimentConfig cfg = g.config.empty() ? oulab::ExperimentConfig{} : oulab::load_config(g.config);
    if (seed_opt->count() > 0 || surface->get_option("--seed")->count() > 0) cfg.mc.seed = seed;
    if (!g_variant.empty()) cfg.surface.g_variant = g_variant;
    if (r_opt->count() > 0) cfg.surface.r = r;
    if (!f.empty()) cfg.surface.f = f;
    if (shells >= 0.0) cfg.surface.shell_width = shells;
    if (paths > 0) cfg.surface.samples = paths;

    std::string suite = "validate-all";
    if (solve->parsed()) suite = "solve";
    if (semigroup->parsed()) suite = "semigroup";
    if (surface->parsed()) suite = "surface";
    (void)validate;

    oulab::RunOptions opt;
    opt.out_dir = g.out;
    opt.jobs = g.jobs;
    opt.enforce_statistical = strict;
    const oulab::RunReport rep = oulab::run(cfg, suite, opt);
    print_summary(rep);
    return rep.exit_code();
  } catch (const oulab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
