#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "treeagg/count_design.hpp"
#include "treeagg/tree.hpp"

// File formats.  All numbers go through locale-independent shortest
// round-trip formatting, so identical results serialize to identical bytes.
// Parse errors carry the file name and 1-based line number.  Fields are
// comma-separated with no quoting; identifiers therefore cannot contain
// commas.

namespace treeagg::io {

std::string format(double v);
std::string format(std::int64_t v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> cells);
};

void write_table_csv(const std::filesystem::path& path, const Table& table);

// Two-column CSV (id, value), used for coefficient files.
void write_pairs_csv(const std::filesystem::path& path,
                     const std::string& id_column,
                     const std::string& value_column,
                     const std::vector<std::string>& ids,
                     const Eigen::VectorXd& values);

// Tree CSV: header `node_id,parent_id` with an optional `height` column;
// the root row leaves parent_id empty (NA also accepted).  Writing keeps
// node labels and emits rows in canonical order, so write-then-read gives
// back the same tree and read-then-write is stable byte-wise.
FeatureTree read_tree_csv(const std::filesystem::path& path,
                          bool collapse_unary = false);
void write_tree_csv(const std::filesystem::path& path, const FeatureTree& tree);

// Design CSV, two layouts detected by the header: the exact header
// `row,col,value` introduces 1-based sparse triplets (dimensions are the
// largest indices seen); any other header names one feature per column with
// one sample per following row.
struct DesignData {
  CountDesign X;
  std::vector<std::string> feature_ids;
};
DesignData read_design_csv(const std::filesystem::path& path);

// One value per line; a single leading non-numeric line is treated as a
// header and skipped.
Eigen::VectorXd read_vector(const std::filesystem::path& path);

// Numeric matrix, one row per line; a leading line with any non-numeric
// cell is treated as a header and skipped.  Rows must agree in width.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

std::vector<std::string> split_csv_line(std::string_view line);

double parse_double(std::string_view text, const std::string& file, int line);
std::int64_t parse_int(std::string_view text, const std::string& file,
                       int line);

}  // namespace treeagg::io
