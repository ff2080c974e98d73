#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treeagg/admm.hpp"
#include "treeagg/io.hpp"
#include "treeagg/manifest.hpp"
#include "treeagg/version.hpp"

// Plumbing shared by the subcommands: option structs, manifest assembly,
// and the output-directory convention (every command writes its files plus
// a manifest.txt into --out).

namespace treeagg::cli {

struct GlobalOpts {
  int threads = 0;  // 0 keeps the runtime default
};

void setup_fit(CLI::App& app, const GlobalOpts& global, int& rc);
void setup_cv(CLI::App& app, const GlobalOpts& global, int& rc);
void setup_tree(CLI::App& app, const GlobalOpts& global, int& rc);
void setup_simulate(CLI::App& app, const GlobalOpts& global, int& rc);
void setup_verify(CLI::App& app, const GlobalOpts& global, int& rc);

class Command {
 public:
  Command(const std::string& name, const std::string& out_dir)
      : dir_(out_dir), start_(std::chrono::steady_clock::now()) {
    std::filesystem::create_directories(dir_);
    manifest_.command = name;
    manifest_.version = TREEAGG_VERSION;
  }

  const std::filesystem::path& dir() const { return dir_; }

  void config(const std::string& key, const std::string& value) {
    manifest_.config.emplace_back(key, value);
  }
  void config(const std::string& key, double value) {
    config(key, io::format(value));
  }
  void config(const std::string& key, std::int64_t value) {
    config(key, io::format(value));
  }
  void config(const std::string& key, int value) {
    config(key, io::format(static_cast<std::int64_t>(value)));
  }
  void config(const std::string& key, bool value) {
    config(key, std::string(value ? "true" : "false"));
  }

  void input(const std::filesystem::path& path) {
    manifest_.inputs.emplace_back(path.string(), fnv1a_file_digest(path));
  }

  std::filesystem::path output(const std::string& name) {
    manifest_.outputs.push_back(name);
    return dir_ / name;
  }

  // Writes manifest.txt; call once, after all outputs exist.
  void finish() {
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    write_manifest(dir_ / "manifest.txt", manifest_);
  }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

inline void add_solver_options(CLI::App* sub, FitConfig& cfg) {
  sub->add_option("--rho", cfg.rho, "ADMM penalty parameter");
  sub->add_option("--eps-abs", cfg.eps_abs, "absolute stopping tolerance");
  sub->add_option("--eps-rel", cfg.eps_rel, "relative stopping tolerance");
  sub->add_option("--max-iter", cfg.max_iter, "iteration cap");
  sub->add_flag("--intercept", cfg.intercept, "fit an unpenalized intercept");
}

// Writes beta.csv, gamma.csv, and fit.json for a solved point; coefficients
// are mapped back through `scale` (the factor X was multiplied by before
// solving).  Returns the command exit code (0, or 2 when not converged).
int write_fit_outputs(Command& cmd, const FitResult& result,
                      const std::vector<std::string>& feature_ids,
                      const FeatureTree& tree, const FitConfig& cfg,
                      double scale);

// Flat single-object JSON with deterministic key order; values must already
// be rendered (numbers via io::format, strings pre-quoted by the caller).
inline void write_flat_json(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& fields) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i)
    out << "  \"" << fields[i].first << "\": " << fields[i].second
        << (i + 1 < fields.size() ? ",\n" : "\n");
  out << "}\n";
}

}  // namespace treeagg::cli
