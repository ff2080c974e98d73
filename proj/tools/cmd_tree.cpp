#include <string>

#include "common.hpp"
#include "treeagg/hclust.hpp"
#include "treeagg/io.hpp"
#include "treeagg/runtime.hpp"

namespace treeagg::cli {

namespace {

struct BuildOpts {
  std::string vectors_file;
  std::string linkage = "complete";
  std::string out_dir = ".";
};

struct CutOpts {
  std::string tree_file;
  std::string mode;
  double threshold = 0.0;
  std::string x_file;
  std::string out_dir = ".";
};

int run_build(const BuildOpts& opt) {
  Command cmd("tree build", opt.out_dir);
  cmd.config("linkage", opt.linkage);
  cmd.input(opt.vectors_file);

  const Eigen::MatrixXd points = io::read_matrix_csv(opt.vectors_file);
  const FeatureTree tree =
      build_tree_hclust(points, linkage_from_string(opt.linkage));
  io::write_tree_csv(cmd.output("tree.csv"), tree);
  cmd.finish();
  return 0;
}

int run_cut(const CutOpts& opt) {
  Command cmd("tree cut", opt.out_dir);
  cmd.config("mode", opt.mode);
  cmd.config("threshold", opt.threshold);
  cmd.input(opt.tree_file);

  const FeatureTree tree = io::read_tree_csv(opt.tree_file);
  AggregatingSet set;
  if (opt.mode == "height") {
    set = cut_by_height(tree, opt.threshold);
  } else if (opt.mode == "density") {
    if (opt.x_file.empty())
      throw std::runtime_error("--mode density requires --x");
    cmd.input(opt.x_file);
    set = cut_by_density(tree, io::read_design_csv(opt.x_file).X,
                         opt.threshold);
  } else {
    throw std::runtime_error("--mode must be height or density");
  }

  io::Table table;
  table.columns = {"node_id", "n_leaves"};
  for (int u : set)
    table.add_row({tree.label(u),
                   io::format(static_cast<std::int64_t>(
                       tree.leaves_below(u).size()))});
  io::write_table_csv(cmd.output("cut.csv"), table);
  cmd.finish();
  return 0;
}

}  // namespace

void setup_tree(CLI::App& app, const GlobalOpts& global, int& rc) {
  CLI::App* sub = app.add_subcommand(
      "tree", "build a dendrogram over features or cut one into groups");
  sub->require_subcommand(1);

  auto bopt = std::make_shared<BuildOpts>();
  CLI::App* build = sub->add_subcommand(
      "build", "hierarchical clustering of feature vectors");
  build->add_option("--vectors", bopt->vectors_file,
                    "CSV of feature vectors, one row per feature")
      ->required()
      ->check(CLI::ExistingFile);
  build
      ->add_option("--linkage", bopt->linkage,
                   "complete, average, single, or ward")
      ->check(CLI::IsMember({"complete", "average", "single", "ward"}));
  build->add_option("--out", bopt->out_dir, "output directory");
  build->callback([bopt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_build(*bopt);
  });

  auto copt = std::make_shared<CutOpts>();
  CLI::App* cut =
      sub->add_subcommand("cut", "flatten a dendrogram to an aggregating set");
  cut->add_option("--tree", copt->tree_file, "tree CSV (node_id,parent_id)")
      ->required()
      ->check(CLI::ExistingFile);
  cut->add_option("--mode", copt->mode, "height or density")->required();
  cut->add_option("--threshold", copt->threshold,
                  "cut height, or minimum aggregated-column density")
      ->required();
  cut->add_option("--x", copt->x_file, "design CSV (density mode only)")
      ->check(CLI::ExistingFile);
  cut->add_option("--out", copt->out_dir, "output directory");
  cut->callback([copt, &global, &rc] {
    if (global.threads > 0) runtime::set_threads(global.threads);
    rc = run_cut(*copt);
  });
}

}  // namespace treeagg::cli
