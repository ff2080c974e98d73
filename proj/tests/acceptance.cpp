// Acceptance gate: nine end-to-end checks at pinned tolerances, printing
// one [PASS]/[FAIL] line each and exiting with the number of failures.
// argv[1] names the command-line binary (used by the determinism check);
// an optional --only=1,4,9 argument restricts the run.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "support/reference.hpp"
#include "treeagg/admm.hpp"
#include "treeagg/aggregation.hpp"
#include "treeagg/baselines.hpp"
#include "treeagg/count_design.hpp"
#include "treeagg/experiments.hpp"
#include "treeagg/io.hpp"
#include "treeagg/rng.hpp"
#include "treeagg/tree.hpp"

namespace fs = std::filesystem;
using treeagg::CountDesign;
using treeagg::Rng;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int col(const treeagg::io::Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i] == name) return static_cast<int>(i);
  throw std::runtime_error("missing column " + name);
}

double sweep_mean(const treeagg::io::Table& t, int k,
                  const std::string& method) {
  const int ck = col(t, "k"), cm = col(t, "method"),
            cv = col(t, "mean_est_err");
  for (const auto& row : t.rows)
    if (std::stoll(row[ck]) == k && row[cm] == method)
      return std::stod(row[cv]);
  throw std::runtime_error("missing sweep row");
}

struct Instance {
  treeagg::FeatureTree tree;
  CountDesign X;
  Eigen::MatrixXd Xd;
  Eigen::VectorXd y;
};

Instance random_instance(Rng& rng) {
  const int p = 5 + static_cast<int>(rng.uniform_int(16));
  const auto n = static_cast<std::int64_t>(20 + rng.uniform_int(41));
  treeagg::FeatureTree tree = refimpl::random_full_tree(rng, p);
  Eigen::MatrixXd Xd(n, p);
  for (std::int64_t i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      Xd(i, j) = static_cast<double>(rng.poisson(0.5));
  const Eigen::VectorXd beta = refimpl::random_grouped_beta(tree, rng);
  Eigen::VectorXd y = Xd * beta;
  for (std::int64_t i = 0; i < n; ++i) y[i] += 0.5 * rng.normal();
  return {std::move(tree), CountDesign(Xd), std::move(Xd), std::move(y)};
}

// ---- 1: solver objective against the independent oracle -------------------

bool criterion_solver(std::string* detail) {
  const auto t0 = Clock::now();
  const double lambdas[] = {0.01, 0.1, 1.0};
  const double alphas[] = {0.0, 0.3, 0.7, 1.0};
  Rng master(101);
  int fits = 0;
  double worst_gap = -1e300, worst_kkt = 0.0;
  int bad = 0, unverified = 0;
  for (int inst = 0; inst < 50; ++inst) {
    Rng rng = master.spawn(inst);
    const Instance in = random_instance(rng);
    refimpl::Problem prob{in.Xd, in.y, refimpl::dense_paths(in.tree), 0.0,
                          0.0};
    const treeagg::AggregationMatrix agg(in.tree);
    for (double lambda : lambdas)
      for (double alpha : alphas) {
        treeagg::FitConfig cfg;
        cfg.lambda = lambda;
        cfg.alpha = alpha;
        cfg.eps_abs = 1e-9;
        cfg.eps_rel = 1e-9;
        cfg.max_iter = 200000;
        const treeagg::FitResult fit = treeagg::fit(in.X, in.y, in.tree, cfg);
        prob.lambda = lambda;
        prob.alpha = alpha;
        const refimpl::Solution oracle = refimpl::solve(prob, 1e-10);
        if (!oracle.verified) ++unverified;
        const double obj = refimpl::objective(prob, fit.gamma);
        const double gap =
            (obj - oracle.objective) / std::max(std::abs(oracle.objective),
                                                1e-300);
        const double kkt = treeagg::kkt_residual(in.X, in.y, agg, fit.beta,
                                                 fit.gamma, cfg);
        worst_gap = std::max(worst_gap, gap);
        worst_kkt = std::max(worst_kkt, kkt);
        if (!(fit.converged && oracle.verified && gap <= 1e-5 &&
              kkt <= 1e-4))
          ++bad;
        ++fits;
      }
  }
  const double el = seconds_since(t0);
  *detail = std::to_string(fits - bad) + "/" + std::to_string(fits) +
            " fits ok, max rel gap " + fmt(worst_gap) + ", max kkt " +
            fmt(worst_kkt) +
            (unverified ? ", " + std::to_string(unverified) +
                              " oracle solves unverified"
                        : "") +
            ", " + fmt(el) + "s";
  return bad == 0 && unverified == 0 && el < 120.0;
}

// ---- 2: endpoint equivalence with the lasso --------------------------------

bool criterion_endpoints(std::string* detail) {
  const auto t0 = Clock::now();
  Rng master(202);
  const double lambdas[] = {0.01, 0.1, 1.0};
  double worst = 0.0;
  int bad = 0;
  for (int inst = 0; inst < 20; ++inst) {
    Rng rng = master.spawn(inst);
    const Instance in = random_instance(rng);
    const double lambda = lambdas[rng.uniform_int(3)];

    treeagg::FitConfig cfg;
    cfg.lambda = lambda;
    cfg.eps_abs = 1e-9;
    cfg.eps_rel = 1e-9;
    cfg.max_iter = 200000;
    treeagg::LassoConfig lcfg;
    lcfg.tol = 1e-11;
    lcfg.max_sweeps = 500000;

    cfg.alpha = 0.0;
    const treeagg::FitResult f0 = treeagg::fit(in.X, in.y, in.tree, cfg);
    const treeagg::LassoResult l0 = treeagg::lasso_cd(in.X, in.y, lambda, lcfg);
    const double d0 =
        (in.Xd * f0.beta - in.Xd * l0.beta).lpNorm<Eigen::Infinity>();

    cfg.alpha = 1.0;
    const treeagg::FitResult f1 = treeagg::fit(in.X, in.y, in.tree, cfg);
    const Eigen::MatrixXd XA = in.Xd * refimpl::dense_paths(in.tree);
    treeagg::LassoConfig lcfg1 = lcfg;
    lcfg1.penalty_factor.assign(static_cast<std::size_t>(XA.cols()), 1.0);
    lcfg1.penalty_factor.back() = 0.0;  // root column
    const treeagg::LassoResult l1 =
        treeagg::lasso_cd(CountDesign(XA), in.y, lambda, lcfg1);
    const double d1 =
        (in.Xd * f1.beta - XA * l1.beta).lpNorm<Eigen::Infinity>();

    worst = std::max({worst, d0, d1});
    if (!(f0.converged && f1.converged && l0.converged && l1.converged &&
          d0 <= 1e-6 && d1 <= 1e-6))
      ++bad;
  }
  const double el = seconds_since(t0);
  *detail = "20 instances, max fitted-value gap " + fmt(worst) + ", " +
            fmt(el) + "s";
  return bad == 0;
}

// ---- 3: identity-design closed forms ---------------------------------------

bool criterion_closed_forms(std::string* detail) {
  Rng master(303);
  const double lambdas[] = {0.0, 0.05, 0.4, 2.0};
  double worst = 0.0;
  int bad = 0;
  for (int rep = 0; rep < 40; ++rep) {
    Rng rng = master.spawn(rep);
    const int k = 1 + static_cast<int>(rng.uniform_int(8));
    const auto block = static_cast<std::int64_t>(1 + rng.uniform_int(12));
    const std::int64_t n = k * block;
    Eigen::VectorXd y(n);
    for (std::int64_t i = 0; i < n; ++i) y[i] = 3.0 * rng.normal();
    const double lambda = lambdas[rep % 4];

    treeagg::BlockSpec spec;
    spec.k = k;
    spec.n = n;
    spec.beta_tilde = Eigen::VectorXd::Zero(k);
    const Eigen::VectorXd mine = treeagg::oracle_lasso_identity(y, spec, lambda);

    Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(n, k);
    for (std::int64_t i = 0; i < n; ++i) ind(i, i / block) = 1.0;
    treeagg::LassoConfig lcfg;
    lcfg.tol = 1e-12;
    const treeagg::LassoResult gen =
        treeagg::lasso_cd(CountDesign(ind), y, lambda, lcfg);
    const double d_blocks =
        (mine - treeagg::broadcast_blocks(gen.beta, n)).lpNorm<Eigen::Infinity>();

    const double t = rng.uniform() * 1.2 * y.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd st = treeagg::lasso_identity(y, t);
    double d_soft = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double s = y[i] > t ? y[i] - t : (y[i] < -t ? y[i] + t : 0.0);
      d_soft = std::max(d_soft, std::abs(st[i] - s));
    }
    const treeagg::LassoResult id_cd = treeagg::lasso_cd(
        CountDesign(Eigen::MatrixXd::Identity(n, n)), y, t / static_cast<double>(n),
        lcfg);
    const double d_id = (st - id_cd.beta).lpNorm<Eigen::Infinity>();

    worst = std::max({worst, d_blocks, d_soft, d_id});
    if (!(d_blocks <= 1e-8 && d_soft <= 1e-8 && d_id <= 1e-8)) ++bad;
  }
  *detail = "40 draws, max gap " + fmt(worst);
  return bad == 0;
}

// ---- 4: rare-feature OLS exceedance bound ----------------------------------

bool criterion_ols_bound(std::string* detail) {
  const auto t0 = Clock::now();
  const treeagg::io::Table t =
      treeagg::verify_ols_failure({100, 1000, 10000}, 4, 1.0, 1.0, 100000,
                                  424242);
  const int cn = col(t, "n"), cr = col(t, "exceed_rate"),
            cb = col(t, "lower_bound");
  // Independent bound value: 2 Phi(-2) through the erf series.
  const double phi = [] {
    long double z = -2.0L / std::sqrt(2.0L), term = z, sum = z;
    for (int i = 1; i < 200; ++i) {
      term *= -z * z / static_cast<long double>(i);
      sum += term / (2 * i + 1);
    }
    const long double erf = sum * 2.0L / std::sqrt(3.14159265358979323846264338328L);
    return static_cast<double>(0.5L * (1.0L + erf));
  }();
  bool ok = true;
  std::string rates;
  for (const auto& row : t.rows) {
    const double rate = std::stod(row[cr]);
    const double bound = std::stod(row[cb]);
    const double se = std::sqrt(rate * (1.0 - rate) / 100000.0);
    if (std::abs(bound - 2.0 * phi) > 1e-9) ok = false;
    if (!(rate >= bound - 3.0 * se)) ok = false;
    rates += (rates.empty() ? "" : " ") + std::string("n=") + row[cn] + ":" +
             fmt(rate);
  }
  const double el = seconds_since(t0);
  *detail = rates + " vs bound " + fmt(2.0 * phi) + ", " + fmt(el) + "s";
  return ok && el < 60.0;
}

// ---- 5: oracle recovery versus lasso ceiling -------------------------------

bool criterion_recovery(std::string* detail) {
  const auto t0 = Clock::now();
  const treeagg::RecoveryReport rep =
      treeagg::verify_support_recovery(10000, 4, 1.0, 0.0, 1000, 515151);
  const double se_o =
      std::sqrt(rep.oracle_rate * (1.0 - rep.oracle_rate) / 1000.0);
  const bool oracle_ok =
      rep.oracle_rate >= rep.oracle_guarantee - 3.0 * se_o;
  const bool lasso_ok = rep.lasso_rate <= std::exp(-1.0) + 0.05;
  const double el = seconds_since(t0);
  *detail = "oracle " + fmt(rep.oracle_rate) + " >= " +
            fmt(rep.oracle_guarantee) + "-3se, lasso " + fmt(rep.lasso_rate) +
            " <= " + fmt(std::exp(-1.0) + 0.05) + ", signal " +
            fmt(rep.signal) + ", tail constant " +
            fmt(treeagg::recovery_constant()) + ", " + fmt(el) + "s";
  return oracle_ok && lasso_ok && el < 120.0;
}

// ---- 6: slow-rate prediction bound ----------------------------------------

bool criterion_prediction_bound(std::string* detail) {
  const auto t0 = Clock::now();
  treeagg::ScenarioSpec base;  // n=100, p=200, k=10, zero_frac=0.2 defaults
  const treeagg::BoundReport rep =
      treeagg::verify_prediction_bound(base, 200, 616161);
  const double nominal = rep.nominal_rate;
  const double limit =
      nominal + 3.0 * std::sqrt(nominal * (1.0 - nominal) / 200.0);
  const double el = seconds_since(t0);
  *detail = std::to_string(rep.violations) + "/200 violations (limit " +
            fmt(limit * 200.0) + "), tree size ok " +
            std::to_string(rep.tree_size_ok) + ", col norms ok " +
            std::to_string(rep.col_norm_ok) + ", corollary chain ok " +
            std::to_string(rep.corollary_chain_ok) + ", " + fmt(el) + "s";
  return rep.violation_rate <= limit && rep.tree_size_ok && rep.col_norm_ok &&
         el < 300.0;
}

// ---- 7: simulation study orderings at reduced scale ------------------------

bool criterion_simulation(std::string* detail) {
  const auto t0 = Clock::now();
  treeagg::SweepConfig sw;
  sw.replicates = 25;
  sw.n_alpha = 4;
  sw.n_lambda = 20;
  sw.seed = 7;
  const std::vector<int> ks = {5, 10, 20, 25};

  treeagg::ScenarioSpec low;
  low.n = 500;
  low.p = 100;
  low.zero_frac = 0.0;
  const treeagg::io::Table tl = treeagg::run_scenario_sweep(low, ks, true, sw);
  bool low_ok = true;
  for (int k : ks)
    low_ok = low_ok && sweep_mean(tl, k, "ours_best") <= sweep_mean(tl, k, "ols");
  const bool near_oracle =
      sweep_mean(tl, 5, "ours_best") <= 2.0 * sweep_mean(tl, 5, "oracle_ls");

  treeagg::ScenarioSpec high;  // defaults are the wide regime
  const treeagg::io::Table th = treeagg::run_scenario_sweep(high, ks, false, sw);
  bool high_ok = true;
  for (int k : ks)
    high_ok =
        high_ok && sweep_mean(th, k, "ours_best") <= sweep_mean(th, k, "lasso_best");

  const std::vector<double> taus = {0.1, 0.15, 0.2, 0.25, 0.3};
  const treeagg::io::Table td = treeagg::run_distortion_sweep(high, taus, sw);
  const int cm = col(td, "mean_pred_err"), cs = col(td, "se_pred_err");
  int inversions = 0;
  bool within_se = true;
  for (std::size_t i = 0; i + 1 < td.rows.size(); ++i) {
    const double a = std::stod(td.rows[i][cm]), b = std::stod(td.rows[i + 1][cm]);
    if (a > b) {
      ++inversions;
      const double se = std::hypot(std::stod(td.rows[i][cs]),
                                   std::stod(td.rows[i + 1][cs]));
      within_se = within_se && (a - b) <= se;
    }
  }
  const bool dist_ok = inversions == 0 || (inversions == 1 && within_se);
  const double el = seconds_since(t0);
  *detail = std::string("low-dim vs ols ") + (low_ok ? "ok" : "BAD") +
            ", oracle factor ok " + std::to_string(near_oracle) +
            ", high-dim vs lasso " + (high_ok ? "ok" : "BAD") +
            ", distortion inversions " + std::to_string(inversions) + ", " +
            fmt(el) + "s";
  return low_ok && near_oracle && high_ok && dist_ok && el < 1200.0;
}

// ---- 8: coarsest aggregating set against exhaustive enumeration ------------

bool criterion_coarsest(std::string* detail) {
  const auto t0 = Clock::now();
  const auto trees = refimpl::all_full_trees(10);
  Rng master(808);
  long long checks = 0, bad = 0;
  for (std::size_t ti = 0; ti < trees.size(); ++ti) {
    const treeagg::FeatureTree tree(trees[ti].first, trees[ti].second);
    const auto sets = refimpl::all_aggregating_sets(tree);
    Rng rng = master.spawn(ti);
    for (int rep = 0; rep < 200; ++rep) {
      const Eigen::VectorXd beta = refimpl::random_grouped_beta(tree, rng);
      const treeagg::AggregatingSet mine =
          treeagg::coarsest_aggregating_set(tree, beta, 0.0);
      // Consistent sets: every branch carries one exact value.
      std::vector<const std::vector<int>*> consistent;
      for (const auto& s : sets) {
        bool ok = true;
        for (int u : s) {
          const auto& leaves = tree.leaves_below(u);
          for (std::size_t i = 1; i < leaves.size() && ok; ++i)
            ok = beta[leaves[i]] == beta[leaves[0]];
          if (!ok) break;
        }
        if (ok) consistent.push_back(&s);
      }
      bool found = false;
      for (const auto* s : consistent) found = found || *s == mine;
      bool coarsest = true;
      for (const auto* s : consistent)
        for (int u : *s) {
          bool contained = false;
          for (int b : mine)
            if (tree.is_ancestor_or_self(b, u)) contained = true;
          coarsest = coarsest && contained;
        }
      ++checks;
      if (!(found && coarsest)) ++bad;
    }
  }
  const double el = seconds_since(t0);
  *detail = std::to_string(trees.size()) + " trees, " +
            std::to_string(checks) + " checks, " + std::to_string(bad) +
            " mismatches, " + fmt(el) + "s";
  return bad == 0;
}

// ---- 9: byte-identical reruns through the command line ---------------------

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_determinism(const std::string& cli, std::string* detail) {
  const auto t0 = Clock::now();
  const fs::path base = fs::current_path() / "acceptance_tmp";
  fs::remove_all(base);
  fs::create_directories(base / "fixtures");

  // Small shared input files.
  Rng rng(909);
  const int p = 6;
  const std::int64_t n = 30;
  treeagg::FeatureTree tree = refimpl::random_full_tree(rng, p);
  Eigen::MatrixXd Xd(n, p);
  for (std::int64_t i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) Xd(i, j) = static_cast<double>(rng.poisson(0.6));
  const Eigen::VectorXd beta = refimpl::random_grouped_beta(tree, rng);
  Eigen::VectorXd y = Xd * beta;
  for (std::int64_t i = 0; i < n; ++i) y[i] += 0.3 * rng.normal();

  treeagg::io::write_tree_csv(base / "fixtures" / "tree.csv", tree);
  {
    treeagg::io::Table tx;
    for (int j = 0; j < p; ++j) tx.columns.push_back("f" + std::to_string(j + 1));
    for (std::int64_t i = 0; i < n; ++i) {
      std::vector<std::string> row;
      for (int j = 0; j < p; ++j) row.push_back(treeagg::io::format(Xd(i, j)));
      tx.add_row(std::move(row));
    }
    treeagg::io::write_table_csv(base / "fixtures" / "x.csv", tx);
    treeagg::io::Table ty;
    ty.columns = {"y"};
    for (std::int64_t i = 0; i < n; ++i) ty.add_row({treeagg::io::format(y[i])});
    treeagg::io::write_table_csv(base / "fixtures" / "y.csv", ty);
    treeagg::io::Table tv;
    tv.columns = {"v1", "v2"};
    Rng vr(910);
    for (int i = 0; i < 8; ++i)
      tv.add_row({treeagg::io::format(vr.normal()), treeagg::io::format(vr.normal())});
    treeagg::io::write_table_csv(base / "fixtures" / "vectors.csv", tv);
  }

  const std::string fx = (base / "fixtures").string();
  int failed_cmd = 0;
  for (int run = 1; run <= 2; ++run) {
    const std::string out = (base / ("run" + std::to_string(run))).string();
    const std::string log = " >> " + out + ".log 2>&1";
    fs::create_directories(out);
    const std::vector<std::string> cmds = {
        cli + " fit --x " + fx + "/x.csv --y " + fx + "/y.csv --tree " + fx +
            "/tree.csv --lambda 0.1 --alpha 0.5 --out " + out + "/fit",
        cli + " cv --x " + fx + "/x.csv --y " + fx + "/y.csv --tree " + fx +
            "/tree.csv --folds 3 --n-lambda 5 --n-alpha 2 --seed 11 --clip 0,4"
            " --out " + out + "/cv",
        cli + " tree build --vectors " + fx +
            "/vectors.csv --linkage average --out " + out + "/tree",
        cli + " tree cut --tree " + out +
            "/tree/tree.csv --mode height --threshold 0.5 --out " + out +
            "/cut",
        cli + " simulate scenario --preset high-dim --k-values 10"
            " --replicates 2 --n-alpha 2 --n-lambda 3 --seed 3 --out " +
            out + "/scenario",
        cli + " simulate distortion --taus 0.2 --replicates 2 --n-alpha 2"
            " --n-lambda 3 --seed 3 --out " + out + "/distortion",
        cli + " verify ols --n-values 200 --replicates 5000 --seed 7 --out " +
            out + "/ols",
        cli + " verify recovery --n 400 --k 4 --replicates 300 --seed 7"
            " --out " + out + "/recovery",
        cli + " verify bound --n 40 --p 60 --k 6 --zero-frac 0"
            " --replicates 3 --seed 7 --out " + out + "/bound",
    };
    for (const auto& c : cmds)
      if (run_cmd(c + log) != 0) ++failed_cmd;
  }

  auto csvs = [&](const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
      if (e.is_regular_file() && e.path().extension() == ".csv")
        files[fs::relative(e.path(), root).string()] = slurp(e.path());
    return files;
  };
  const auto a = csvs(base / "run1");
  const auto b = csvs(base / "run2");
  int mismatched = 0;
  if (a.size() != b.size()) ++mismatched;
  for (const auto& [rel, bytes] : a) {
    const auto it = b.find(rel);
    if (it == b.end() || it->second != bytes) ++mismatched;
  }
  const double el = seconds_since(t0);
  *detail = std::to_string(a.size()) + " csv files compared, " +
            std::to_string(mismatched) + " mismatches, " +
            std::to_string(failed_cmd) + " failed commands, " + fmt(el) + "s";
  return failed_cmd == 0 && mismatched == 0 && !a.empty();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--only=", 0) == 0) {
      std::stringstream ss(arg.substr(7));
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    }
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string*)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "solver objective and stationarity vs independent oracle",
       criterion_solver},
      {2, "endpoint equivalence with lasso solutions", criterion_endpoints},
      {3, "identity-design closed forms", criterion_closed_forms},
      {4, "rare-feature least squares exceedance bound", criterion_ols_bound},
      {5, "aggregated-oracle recovery vs lasso ceiling", criterion_recovery},
      {6, "slow-rate prediction bound frequency", criterion_prediction_bound},
      {7, "simulation study orderings at reduced scale", criterion_simulation},
      {8, "coarsest aggregating set vs exhaustive enumeration",
       criterion_coarsest},
      {9, "byte-identical command line reruns",
       [&cli](std::string* detail) {
         return criterion_determinism(cli.empty() ? "treeagg" : cli, detail);
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
