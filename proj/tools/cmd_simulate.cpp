#include <string>
#include <vector>

#include "common.hpp"
#include "treeagg/experiments.hpp"
#include "treeagg/io.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg::cli {

namespace {

// The two studied regimes: a tall design with no null groups, and a wide
// design with a fifth of the groups null.
ScenarioSpec preset_spec(const std::string& name) {
  ScenarioSpec spec;
  if (name == "low-dim") {
    spec.n = 500;
    spec.p = 100;
    spec.zero_frac = 0.0;
  } else if (name == "high-dim") {
    spec.n = 100;
    spec.p = 200;
    spec.zero_frac = 0.2;
  } else {
    throw std::runtime_error("unknown preset '" + name +
                             "' (expected low-dim or high-dim)");
  }
  return spec;
}

struct ScenarioOpts {
  std::string preset;
  std::vector<int> k_values = {5, 10, 20, 25};
  SweepConfig sweep;
  std::string out_dir = ".";
};

struct DistortionOpts {
  std::vector<double> taus = {0.1, 0.15, 0.2, 0.25, 0.3};
  SweepConfig sweep;
  std::string out_dir = ".";
};

void add_sweep_options(CLI::App* sub, SweepConfig& sweep) {
  sub->add_option("--replicates", sweep.replicates, "Monte Carlo repetitions");
  sub->add_option("--n-alpha", sweep.n_alpha, "alpha grid size");
  sub->add_option("--n-lambda", sweep.n_lambda, "lambda grid size per alpha");
  sub->add_option("--lambda-min-ratio", sweep.lambda_min_ratio,
                  "smallest lambda as a fraction of lambda_max");
  sub->add_option("--seed", sweep.seed, "master seed");
  sub->add_option("--eps-abs", sweep.solver.eps_abs,
                  "solver absolute tolerance");
  sub->add_option("--eps-rel", sweep.solver.eps_rel,
                  "solver relative tolerance");
  sub->add_option("--max-iter", sweep.solver.max_iter,
                  "solver iteration cap");
}

void record_sweep_config(Command& cmd, const SweepConfig& sweep) {
  cmd.config("replicates", sweep.replicates);
  cmd.config("n_alpha", sweep.n_alpha);
  cmd.config("n_lambda", sweep.n_lambda);
  cmd.config("lambda_min_ratio", sweep.lambda_min_ratio);
  cmd.config("seed", static_cast<std::int64_t>(sweep.seed));
  cmd.config("eps_abs", sweep.solver.eps_abs);
  cmd.config("eps_rel", sweep.solver.eps_rel);
  cmd.config("max_iter", sweep.solver.max_iter);
}

int run_scenario(const ScenarioOpts& opt) {
  Command cmd("simulate scenario", opt.out_dir);
  cmd.config("preset", opt.preset);
  {
    std::string ks;
    for (int k : opt.k_values) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    cmd.config("k_values", ks);
  }
  record_sweep_config(cmd, opt.sweep);

  const ScenarioSpec base = preset_spec(opt.preset);
  const io::Table table = run_scenario_sweep(
      base, opt.k_values, /*low_dim=*/opt.preset == "low-dim", opt.sweep);
  io::write_table_csv(cmd.output("scenario_errors.csv"), table);
  cmd.finish();
  return 0;
}

int run_distortion(const DistortionOpts& opt) {
  Command cmd("simulate distortion", opt.out_dir);
  {
    std::string ts;
    for (double t : opt.taus) ts += (ts.empty() ? "" : ",") + io::format(t);
    cmd.config("taus", ts);
  }
  record_sweep_config(cmd, opt.sweep);

  const ScenarioSpec base = preset_spec("high-dim");
  const io::Table table = run_distortion_sweep(base, opt.taus, opt.sweep);
  io::write_table_csv(cmd.output("distortion_errors.csv"), table);
  cmd.finish();
  return 0;
}

}  // namespace

void setup_simulate(CLI::App& app, const GlobalOpts& global, int& rc) {
  CLI::App* sub = app.add_subcommand(
      "simulate", "synthetic-data comparison sweeps against the baselines");
  sub->require_subcommand(1);

  auto sopt = std::make_shared<ScenarioOpts>();
  CLI::App* scenario = sub->add_subcommand(
      "scenario", "estimation error versus group count k");
  scenario->add_option("--preset", sopt->preset, "low-dim or high-dim")
      ->required();
  scenario->add_option("--k-values", sopt->k_values,
                       "group counts to sweep (each must divide p)")
      ->delimiter(',');
  add_sweep_options(scenario, sopt->sweep);
  scenario->add_option("--out", sopt->out_dir, "output directory");
  scenario->callback([sopt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_scenario(*sopt);
  });

  auto dopt = std::make_shared<DistortionOpts>();
  CLI::App* distortion = sub->add_subcommand(
      "distortion",
      "prediction error as the tree degrades (high-dim regime, k = 10)");
  distortion->add_option("--taus", dopt->taus, "latent spreads to sweep")
      ->delimiter(',');
  add_sweep_options(distortion, dopt->sweep);
  distortion->add_option("--out", dopt->out_dir, "output directory");
  distortion->callback([dopt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_distortion(*dopt);
  });
}

}  // namespace treeagg::cli
