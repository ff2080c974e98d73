#include <string>

#include "common.hpp"
#include "treeagg/admm.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/io.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg::cli {

namespace {

struct FitOpts {
  std::string x_file, y_file, tree_file;
  std::string out_dir = ".";
  FitConfig cfg;
  bool normalize = false;
  bool collapse_unary = false;
};

}  // namespace

int write_fit_outputs(Command& cmd, const FitResult& result,
                      const std::vector<std::string>& feature_ids,
                      const FeatureTree& tree, const FitConfig& cfg,
                      double scale) {
  // Coefficients are reported on the input scale of X; `scale` is the
  // factor the design was multiplied by before solving.
  std::vector<std::string> node_ids(tree.node_count());
  for (int u = 0; u < tree.node_count(); ++u) node_ids[u] = tree.label(u);
  io::write_pairs_csv(cmd.output("beta.csv"), "feature_id", "coefficient",
                      feature_ids, result.beta * scale);
  io::write_pairs_csv(cmd.output("gamma.csv"), "node_id", "coefficient",
                      node_ids, result.gamma * scale);

  write_flat_json(
      cmd.output("fit.json"),
      {{"lambda", io::format(cfg.lambda)},
       {"alpha", io::format(cfg.alpha)},
       {"rho", io::format(cfg.rho)},
       {"eps_abs", io::format(cfg.eps_abs)},
       {"eps_rel", io::format(cfg.eps_rel)},
       {"max_iter", io::format(static_cast<std::int64_t>(cfg.max_iter))},
       {"intercept_enabled", cfg.intercept ? "true" : "false"},
       {"design_scale", io::format(scale)},
       {"converged", result.converged ? "true" : "false"},
       {"iterations", io::format(static_cast<std::int64_t>(result.iterations))},
       {"primal_residual", io::format(result.primal_residual)},
       {"dual_residual", io::format(result.dual_residual)},
       {"objective", io::format(result.objective)},
       {"consensus_gap", io::format(result.consensus_gap)},
       {"intercept", io::format(result.intercept)}});
  return result.converged ? 0 : 2;
}

static int run_fit(const FitOpts& opt) {
  Command cmd("fit", opt.out_dir);
  cmd.config("lambda", opt.cfg.lambda);
  cmd.config("alpha", opt.cfg.alpha);
  cmd.config("rho", opt.cfg.rho);
  cmd.config("eps_abs", opt.cfg.eps_abs);
  cmd.config("eps_rel", opt.cfg.eps_rel);
  cmd.config("max_iter", opt.cfg.max_iter);
  cmd.config("intercept", opt.cfg.intercept);
  cmd.config("normalize", opt.normalize);
  cmd.config("collapse_unary", opt.collapse_unary);
  cmd.input(opt.x_file);
  cmd.input(opt.y_file);
  cmd.input(opt.tree_file);

  const io::DesignData design = io::read_design_csv(opt.x_file);
  const Eigen::VectorXd y = io::read_vector(opt.y_file);
  const FeatureTree tree =
      io::read_tree_csv(opt.tree_file, opt.collapse_unary);
  if (tree.leaf_count() != design.X.cols())
    throw std::runtime_error(
        "--tree has " + std::to_string(tree.leaf_count()) +
        " leaves but --x has " + std::to_string(design.X.cols()) +
        " feature columns");

  double scale = 1.0;
  FitResult result;
  if (opt.normalize) {
    const NormalizedDesign norm = normalize_for_theory(design.X);
    scale = norm.scale;
    result = fit(norm.X, y, tree, opt.cfg);
  } else {
    result = fit(design.X, y, tree, opt.cfg);
  }

  const int rc =
      write_fit_outputs(cmd, result, design.feature_ids, tree, opt.cfg, scale);
  cmd.finish();
  return rc;
}

void setup_fit(CLI::App& app, const GlobalOpts& global, int& rc) {
  auto opt = std::make_shared<FitOpts>();
  CLI::App* sub = app.add_subcommand(
      "fit", "solve the aggregation problem at one (lambda, alpha)");
  sub->add_option("--x", opt->x_file, "design CSV (dense or row,col,value)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--y", opt->y_file, "response file, one value per line")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--tree", opt->tree_file, "tree CSV (node_id,parent_id)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--lambda", opt->cfg.lambda, "penalty level")->required();
  sub->add_option("--alpha", opt->cfg.alpha, "aggregation weight in [0,1]")
      ->required();
  add_solver_options(sub, opt->cfg);
  sub->add_flag("--normalize", opt->normalize,
                "rescale X so ||X 1||^2 = n before solving");
  sub->add_flag("--collapse-unary", opt->collapse_unary,
                "splice out single-child internal tree nodes");
  sub->add_option("--out", opt->out_dir, "output directory");
  sub->callback([opt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_fit(*opt);
  });
}

}  // namespace treeagg::cli
