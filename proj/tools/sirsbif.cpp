// Command-line front end for the SIRS bifurcation toolkit.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sirs/cli/config.hpp"
#include "sirs/cli/registry.hpp"
#include "sirs/cli/run.hpp"
#include "sirs/errors.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::string> out;
  std::optional<double> rel_tol;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "scenario JSON file");
  if (config_required) opt->required();
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--rel-tol", c.rel_tol, "integrator relative tolerance (default 1e-12)");
  sub->add_option("--format", c.format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
  sub->add_option("--seed", c.seed, "seed for randomized starts");
  sub->add_option("--jobs", c.jobs, "parallel workers");
}

void apply_overrides(sirs::cli::ScenarioConfig& cfg, const Common& c) {
  if (c.out) cfg.out_dir = *c.out;
  if (c.rel_tol) {
    if (!(*c.rel_tol >= 1e-13)) throw sirs::ConfigError("--rel-tol must be at least 1e-13");
    cfg.rel_tol = *c.rel_tol;
  }
  if (c.format) cfg.format = sirs::cli::parse_format(*c.format);
  if (c.seed) cfg.seed = *c.seed;
  if (c.jobs) cfg.jobs = *c.jobs;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sirs::cli;
  CLI::App app{"Bifurcation analysis of a planar SIRS model with nonlinear incidence"};
  app.require_subcommand(1);

  Common common;
  std::string figure_id;
  const char* tasks[] = {"equilibria", "classify", "hopf", "cycles", "simulate", "sweep"};
  for (const char* t : tasks) add_common(app.add_subcommand(t, std::string("run the ") + t + " task"), common, true);
  auto* fig = app.add_subcommand("figure", "reproduce a registered figure");
  fig->add_option("id", figure_id, "figure id (see list-figures)");
  add_common(fig, common, false);
  auto* list = app.add_subcommand("list-figures", "print the figure registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& f : figure_registry()) {
      std::cout << f.id << "  k=" << f.k << " lambda0=" << f.lambda0 << " p=" << f.p << " gamma=" << f.gamma
                << " eta=" << f.eta;
      if (!f.grid.empty()) std::cout << "  sweep " << f.sweep_parameter << " over " << f.grid.size() << " values";
      std::cout << "  | " << f.provenance << '\n';
    }
    return kExitOk;
  }

  const std::string task = app.get_subcommands().front()->get_name();
  ScenarioConfig cfg;
  try {
    if (!common.config.empty()) cfg = load_config(common.config);
    if (!cfg.task.empty() && cfg.task != task)
      throw sirs::ConfigError("config task '" + cfg.task + "' does not match subcommand '" + task + "'");
    cfg.task = task;
    if (task == "figure") {
      if (!figure_id.empty()) cfg.figure = figure_id;
      if (cfg.figure.empty()) throw sirs::ConfigError("figure: give an id or options.figure");
      if (!common.out && common.config.empty()) cfg.out_dir = "out/" + cfg.figure;
    }
    apply_overrides(cfg, common);
  } catch (const sirs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sirs::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }
  return run_scenario_status(cfg, std::cout, std::cerr);
}
