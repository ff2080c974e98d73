#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "treeagg/runtime.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tree-guided aggregation of rare count features in linear "
               "regression"};
  app.require_subcommand(1);
  app.fallthrough();

  treeagg::cli::GlobalOpts global;
  app.add_option("--threads", global.threads,
                 "worker threads for grids, folds, and replicates");

  int rc = 0;
  treeagg::cli::setup_fit(app, global, rc);
  treeagg::cli::setup_cv(app, global, rc);
  treeagg::cli::setup_tree(app, global, rc);
  treeagg::cli::setup_simulate(app, global, rc);
  treeagg::cli::setup_verify(app, global, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
