#include <cmath>
#include <string>
#include <vector>

#include "common.hpp"
#include "treeagg/experiments.hpp"
#include "treeagg/io.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg::cli {

namespace {

double binomial_se(double rate, int n) {
  return std::sqrt(rate * (1.0 - rate) / n);
}

struct OlsOpts {
  std::vector<std::int64_t> n_values = {100, 1000, 10000};
  int k = 4;
  double eta = 1.0;
  double sigma = 1.0;
  int replicates = 100000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_ols(const OlsOpts& opt) {
  Command cmd("verify ols", opt.out_dir);
  {
    std::string ns;
    for (auto n : opt.n_values) ns += (ns.empty() ? "" : ",") + io::format(n);
    cmd.config("n_values", ns);
  }
  cmd.config("k", opt.k);
  cmd.config("eta", opt.eta);
  cmd.config("sigma", opt.sigma);
  cmd.config("replicates", opt.replicates);
  cmd.config("seed", static_cast<std::int64_t>(opt.seed));

  const io::Table table = verify_ols_failure(opt.n_values, opt.k, opt.eta,
                                             opt.sigma, opt.replicates,
                                             opt.seed);
  io::write_table_csv(cmd.output("ols_exceedance.csv"), table);
  cmd.finish();
  return 0;
}

struct RecoveryOpts {
  std::int64_t n = 10000;
  int k = 4;
  double sigma = 1.0;
  double signal = 0.0;  // <= 0 picks the window's upper end
  int replicates = 1000;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

int run_recovery(const RecoveryOpts& opt) {
  Command cmd("verify recovery", opt.out_dir);
  cmd.config("n", opt.n);
  cmd.config("k", opt.k);
  cmd.config("sigma", opt.sigma);
  cmd.config("signal", opt.signal);
  cmd.config("replicates", opt.replicates);
  cmd.config("seed", static_cast<std::int64_t>(opt.seed));

  const RecoveryReport rep = verify_support_recovery(
      opt.n, opt.k, opt.sigma, opt.signal, opt.replicates, opt.seed);

  io::Table table;
  table.columns = {"n",
                   "k",
                   "replicates",
                   "sigma",
                   "signal",
                   "lambda",
                   "window_lo",
                   "window_hi",
                   "tail_constant",
                   "oracle_rate",
                   "oracle_se",
                   "oracle_guarantee",
                   "lasso_rate",
                   "lasso_se",
                   "lasso_ceiling"};
  table.add_row({io::format(rep.n), io::format(static_cast<std::int64_t>(rep.k)),
                 io::format(static_cast<std::int64_t>(rep.replicates)),
                 io::format(rep.sigma), io::format(rep.signal),
                 io::format(rep.lambda), io::format(rep.window.lo),
                 io::format(rep.window.hi), io::format(recovery_constant()),
                 io::format(rep.oracle_rate),
                 io::format(binomial_se(rep.oracle_rate, rep.replicates)),
                 io::format(rep.oracle_guarantee), io::format(rep.lasso_rate),
                 io::format(binomial_se(rep.lasso_rate, rep.replicates)),
                 io::format(rep.lasso_ceiling)});
  io::write_table_csv(cmd.output("recovery.csv"), table);
  cmd.finish();
  return 0;
}

struct BoundOpts {
  std::int64_t n = 100;
  int p = 200;
  int k = 10;
  double zero_frac = 0.2;
  int replicates = 200;
  std::uint64_t seed = 1;
  FitConfig solver;
  std::string out_dir = ".";
};

int run_bound(const BoundOpts& opt) {
  Command cmd("verify bound", opt.out_dir);
  cmd.config("n", opt.n);
  cmd.config("p", opt.p);
  cmd.config("k", opt.k);
  cmd.config("zero_frac", opt.zero_frac);
  cmd.config("replicates", opt.replicates);
  cmd.config("seed", static_cast<std::int64_t>(opt.seed));
  cmd.config("eps_abs", opt.solver.eps_abs);
  cmd.config("eps_rel", opt.solver.eps_rel);
  cmd.config("max_iter", opt.solver.max_iter);

  ScenarioSpec base;
  base.n = opt.n;
  base.p = opt.p;
  base.k = opt.k;
  base.zero_frac = opt.zero_frac;
  const BoundReport rep =
      verify_prediction_bound(base, opt.replicates, opt.seed, opt.solver);

  io::Table table;
  table.columns = {"replicates",    "violations",     "violation_rate",
                   "nominal_rate",  "mean_lhs",       "mean_rhs",
                   "mean_alpha",    "tree_size_ok",   "col_norm_ok",
                   "corollary_chain_ok"};
  table.add_row({io::format(static_cast<std::int64_t>(rep.replicates)),
                 io::format(static_cast<std::int64_t>(rep.violations)),
                 io::format(rep.violation_rate), io::format(rep.nominal_rate),
                 io::format(rep.mean_lhs), io::format(rep.mean_rhs),
                 io::format(rep.mean_alpha), rep.tree_size_ok ? "1" : "0",
                 rep.col_norm_ok ? "1" : "0",
                 rep.corollary_chain_ok ? "1" : "0"});
  io::write_table_csv(cmd.output("bound.csv"), table);
  cmd.finish();
  return 0;
}

}  // namespace

void setup_verify(CLI::App& app, const GlobalOpts& global, int& rc) {
  CLI::App* sub = app.add_subcommand(
      "verify", "Monte Carlo checks of the finite-sample guarantees");
  sub->require_subcommand(1);

  auto oopt = std::make_shared<OlsOpts>();
  CLI::App* ols = sub->add_subcommand(
      "ols", "exceedance rate of the OLS coefficient on a rare feature");
  ols->add_option("--n-values", oopt->n_values, "sample sizes")->delimiter(',');
  ols->add_option("--k", oopt->k, "active samples of the rare feature");
  ols->add_option("--eta", oopt->eta, "exceedance threshold");
  ols->add_option("--sigma", oopt->sigma, "noise level");
  ols->add_option("--replicates", oopt->replicates, "Monte Carlo repetitions");
  ols->add_option("--seed", oopt->seed, "master seed");
  ols->add_option("--out", oopt->out_dir, "output directory");
  ols->callback([oopt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_ols(*oopt);
  });

  auto ropt = std::make_shared<RecoveryOpts>();
  CLI::App* recovery = sub->add_subcommand(
      "recovery",
      "signed-support recovery: aggregated oracle versus plain lasso");
  recovery->add_option("--n", ropt->n, "sample size (multiple of k)");
  recovery->add_option("--k", ropt->k, "number of blocks");
  recovery->add_option("--sigma", ropt->sigma, "noise level");
  recovery->add_option("--signal", ropt->signal,
                       "block coefficient magnitude (<= 0 uses the window's "
                       "upper end)");
  recovery->add_option("--replicates", ropt->replicates,
                       "Monte Carlo repetitions");
  recovery->add_option("--seed", ropt->seed, "master seed");
  recovery->add_option("--out", ropt->out_dir, "output directory");
  recovery->callback([ropt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_recovery(*ropt);
  });

  auto bopt = std::make_shared<BoundOpts>();
  CLI::App* bound = sub->add_subcommand(
      "bound", "slow-rate prediction bound violation frequency");
  bound->add_option("--n", bopt->n, "sample size");
  bound->add_option("--p", bopt->p, "feature count");
  bound->add_option("--k", bopt->k, "planted group count");
  bound->add_option("--zero-frac", bopt->zero_frac,
                    "fraction of null groups");
  bound->add_option("--replicates", bopt->replicates,
                    "Monte Carlo repetitions");
  bound->add_option("--seed", bopt->seed, "master seed");
  bound->add_option("--eps-abs", bopt->solver.eps_abs,
                    "solver absolute tolerance");
  bound->add_option("--eps-rel", bopt->solver.eps_rel,
                    "solver relative tolerance");
  bound->add_option("--max-iter", bopt->solver.max_iter,
                    "solver iteration cap");
  bound->add_option("--out", bopt->out_dir, "output directory");
  bound->callback([bopt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_bound(*bopt);
  });
}

}  // namespace treeagg::cli
