#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "catdom/cli.hpp"

int main(int argc, char** argv) {
  using catdom::cli::Command;
  catdom::cli::RunConfig cfg;

  CLI::App app{"catdom: exact stochastic dominance, catalysts and large deviations for random walks"};
  app.set_version_flag("--version", catdom::cli::kToolVersion);
  app.require_subcommand(1);

  auto common = [&cfg](CLI::App* sub) {
    sub->add_option("inputs", cfg.inputs, "measure files (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--cone", cfg.cone, "halfline, orthant, or a cone file (default: halfline in 1-D, orthant otherwise)");
    sub->add_flag("--normalize", cfg.normalize, "divide weights by total mass");
    sub->add_option("--seed", cfg.seed, "seed for direction sampling")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "random dual directions beyond rays and midpoints")->capture_default_str();
    sub->add_option("--theta-points", cfg.theta_points, "radial grid size")->capture_default_str();
    sub->add_option("--margin-tol", cfg.margin_tol, "tolerance for interior margins")->capture_default_str();
    sub->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
    sub->add_option("--cap", cfg.cap, "atom budget for convolution powers")->capture_default_str();
    sub->add_option("--json", cfg.json_out, "write the JSON report here ('-' for stdout)");
    sub->add_option("--csv", cfg.csv_out, "write CSV data here");
    sub->add_option("--plot", cfg.plot_out, "write a gnuplot script for the CSV here");
  };

  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"order-check", {Command::OrderCheck, "exact stochastic order X <= Y with witness"}},
      {"spectrum", {Command::Spectrum, "compare normalized cumulant-generating functions"}},
      {"dominate", {Command::Dominate, "spectral dominance verdict with interpretation"}},
      {"min-n", {Command::MinN, "smallest n0 with X^n <= Y^n for all n in [n0, n-max]"}},
      {"catalyst", {Command::Catalyst, "search a 1-D catalyst Z on a lattice grid"}},
      {"rate-fn", {Command::RateFn, "rate function of one measure at --c"}},
      {"rel-rate", {Command::RelRate, "relative decay rate: (n, lhs) table and sup over dual cone"}},
      {"cramer", {Command::Cramer, "exact (1/n) log P(sum >= n c) against the rate function"}},
  };
  std::map<CLI::App*, Command> lookup;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    common(sub);
    lookup[sub] = entry.first;
    switch (entry.first) {
      case Command::MinN:
        sub->add_option("--n-max", cfg.n_max, "largest n checked")->capture_default_str();
        break;
      case Command::Catalyst:
        sub->add_option("--grid-step", cfg.grid_step, "grid step (default: coarsest lattice step)");
        sub->add_option("--grid-points", cfg.grid_points, "number of grid points")->capture_default_str();
        break;
      case Command::RateFn:
        sub->add_option("--c", cfg.c, "point, e.g. 3/4 or 1/2,3/4")->required();
        break;
      case Command::RelRate:
        sub->add_option("--eps", cfg.eps, "shift of the Y walk along the unit")->capture_default_str();
        sub->add_option("--n-list", cfg.n_list, "values of n for the table")->delimiter(',');
        break;
      case Command::Cramer:
        sub->add_option("--c", cfg.c, "threshold point")->required();
        sub->add_option("--n", cfg.n, "number of steps")->capture_default_str();
        break;
      default:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : catdom::cli::kError;
  }
  for (const auto& [sub, cmd] : lookup)
    if (sub->parsed()) cfg.command = cmd;
  return catdom::cli::run(cfg, std::cout, std::cerr);
}
