#include <string>
#include <vector>

#include "common.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/io.hpp"
#include "treeagg/model_selection.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg::cli {

namespace {

struct CvOpts {
  std::string x_file, y_file, tree_file;
  std::string out_dir = ".";
  FitConfig cfg;
  bool normalize = false;
  bool collapse_unary = false;
  int folds = 5;
  int n_lambda = 50;
  int n_alpha = 8;
  double lambda_min_ratio = 1e-3;
  std::uint64_t seed = 1;
  std::vector<double> clip;  // empty or {lo, hi}
};

int run_cv(const CvOpts& opt) {
  if (!opt.clip.empty() && opt.clip.size() != 2)
    throw std::runtime_error("--clip expects two values lo,hi");

  Command cmd("cv", opt.out_dir);
  cmd.config("folds", opt.folds);
  cmd.config("n_lambda", opt.n_lambda);
  cmd.config("n_alpha", opt.n_alpha);
  cmd.config("lambda_min_ratio", opt.lambda_min_ratio);
  cmd.config("seed", static_cast<std::int64_t>(opt.seed));
  cmd.config("rho", opt.cfg.rho);
  cmd.config("eps_abs", opt.cfg.eps_abs);
  cmd.config("eps_rel", opt.cfg.eps_rel);
  cmd.config("max_iter", opt.cfg.max_iter);
  cmd.config("intercept", opt.cfg.intercept);
  cmd.config("normalize", opt.normalize);
  cmd.config("collapse_unary", opt.collapse_unary);
  if (!opt.clip.empty()) {
    cmd.config("clip_lo", opt.clip[0]);
    cmd.config("clip_hi", opt.clip[1]);
  }
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
  CountDesign X = design.X;
  if (opt.normalize) {
    NormalizedDesign norm = normalize_for_theory(X);
    scale = norm.scale;
    X = std::move(norm.X);
  }

  const auto grid =
      make_grid(X, y, opt.n_alpha, opt.n_lambda, opt.lambda_min_ratio);
  Clip clip;
  if (!opt.clip.empty()) clip = {opt.clip[0], opt.clip[1]};
  const CVResult cv = kfold_cv(X, y, tree, grid, opt.folds, opt.seed, opt.cfg,
                               opt.clip.empty() ? nullptr : &clip);

  io::Table table;
  table.columns = {"lambda", "alpha", "cv_mean", "cv_se", "selected"};
  for (std::size_t j = 0; j < cv.grid.size(); ++j)
    table.add_row({io::format(cv.grid[j].lambda), io::format(cv.grid[j].alpha),
                   io::format(cv.cv_mean[j]), io::format(cv.cv_se[j]),
                   static_cast<int>(j) == cv.best_index ? "1" : "0"});
  io::write_table_csv(cmd.output("cv.csv"), table);

  io::Table best;
  best.columns = {"lambda", "alpha", "cv_mean", "cv_se"};
  best.add_row({io::format(cv.grid[cv.best_index].lambda),
                io::format(cv.grid[cv.best_index].alpha),
                io::format(cv.cv_mean[cv.best_index]),
                io::format(cv.cv_se[cv.best_index])});
  io::write_table_csv(cmd.output("cv_best.csv"), best);

  FitConfig best_cfg = opt.cfg;
  best_cfg.lambda = cv.grid[cv.best_index].lambda;
  best_cfg.alpha = cv.grid[cv.best_index].alpha;
  const int rc = write_fit_outputs(cmd, cv.refit, design.feature_ids, tree,
                                   best_cfg, scale);
  cmd.finish();
  return rc;
}

}  // namespace

void setup_cv(CLI::App& app, const GlobalOpts& global, int& rc) {
  auto opt = std::make_shared<CvOpts>();
  CLI::App* sub = app.add_subcommand(
      "cv", "select (lambda, alpha) by k-fold cross-validation and refit");
  sub->add_option("--x", opt->x_file, "design CSV (dense or row,col,value)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--y", opt->y_file, "response file, one value per line")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--tree", opt->tree_file, "tree CSV (node_id,parent_id)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--folds", opt->folds, "number of folds");
  sub->add_option("--n-lambda", opt->n_lambda, "lambda grid size per alpha");
  sub->add_option("--n-alpha", opt->n_alpha, "alpha grid size");
  sub->add_option("--lambda-min-ratio", opt->lambda_min_ratio,
                  "smallest lambda as a fraction of lambda_max");
  sub->add_option("--seed", opt->seed, "fold-shuffle seed");
  sub->add_option("--clip", opt->clip,
                  "clamp validation predictions to lo,hi before scoring")
      ->delimiter(',')
      ->expected(0, 2);
  add_solver_options(sub, opt->cfg);
  sub->add_flag("--normalize", opt->normalize,
                "rescale X so ||X 1||^2 = n before solving");
  sub->add_flag("--collapse-unary", opt->collapse_unary,
                "splice out single-child internal tree nodes");
  sub->add_option("--out", opt->out_dir, "output directory");
  sub->callback([opt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_cv(*opt);
  });
}

}  // namespace treeagg::cli
