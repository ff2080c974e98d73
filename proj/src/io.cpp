#include "treeagg/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace treeagg::io {

namespace {

[[noreturn]] void fail(const std::string& file, int line,
                       const std::string& message) {
  throw std::runtime_error(file + ":" + std::to_string(line) + ": " + message);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

// Strips a trailing carriage return so CRLF files parse like LF ones.
bool get_line(std::ifstream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool parses_as_double(std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

std::string format(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format(std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& file, int line) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    fail(file, line, "expected a number, got '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text, const std::string& file,
                       int line) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    fail(file, line, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.emplace_back(line.substr(start));
      return cells;
    }
    cells.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw std::invalid_argument("table row width mismatch");
  rows.push_back(std::move(cells));
}

void write_table_csv(const std::filesystem::path& path, const Table& table) {
  auto out = open_out(path);
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << row[c];
    out << "\n";
  }
}

void write_pairs_csv(const std::filesystem::path& path,
                     const std::string& id_column,
                     const std::string& value_column,
                     const std::vector<std::string>& ids,
                     const Eigen::VectorXd& values) {
  if (static_cast<Eigen::Index>(ids.size()) != values.size())
    throw std::invalid_argument("pairs csv: id/value length mismatch");
  auto out = open_out(path);
  out << id_column << "," << value_column << "\n";
  for (std::size_t i = 0; i < ids.size(); ++i)
    out << ids[i] << "," << format(values[i]) << "\n";
}

FeatureTree read_tree_csv(const std::filesystem::path& path,
                          bool collapse_unary) {
  auto in = open_in(path);
  const std::string name = path.string();
  std::string line;
  if (!get_line(in, line)) fail(name, 1, "empty tree file");
  const auto header = split_csv_line(line);
  const bool with_height =
      header.size() == 3 && header[2] == "height";
  if (!(header.size() == 2 || with_height) || header[0] != "node_id" ||
      header[1] != "parent_id")
    fail(name, 1, "expected header node_id,parent_id[,height]");

  std::vector<std::pair<std::string, std::string>> links;
  std::vector<double> heights;
  int lineno = 1;
  while (get_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(name, lineno, "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(cells.size()));
    std::string parent = cells[1];
    if (parent == "NA") parent.clear();
    links.emplace_back(cells[0], parent);
    if (with_height) heights.push_back(parse_double(cells[2], name, lineno));
  }
  try {
    return FeatureTree::from_links(links, heights, collapse_unary);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
}

void write_tree_csv(const std::filesystem::path& path,
                    const FeatureTree& tree) {
  auto out = open_out(path);
  out << (tree.has_heights() ? "node_id,parent_id,height\n"
                             : "node_id,parent_id\n");
  for (int u = 0; u < tree.node_count(); ++u) {
    out << tree.label(u) << ",";
    if (tree.parent(u) != -1) out << tree.label(tree.parent(u));
    if (tree.has_heights()) out << "," << format(tree.height(u));
    out << "\n";
  }
}

DesignData read_design_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string name = path.string();
  std::string line;
  if (!get_line(in, line)) fail(name, 1, "empty design file");
  const auto header = split_csv_line(line);

  if (header.size() == 3 && header[0] == "row" && header[1] == "col" &&
      header[2] == "value") {
    std::vector<DesignEntry> entries;
    std::int64_t max_row = 0, max_col = 0;
    int lineno = 1;
    while (get_line(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 3) fail(name, lineno, "expected row,col,value");
      const std::int64_t r = parse_int(cells[0], name, lineno);
      const std::int64_t c = parse_int(cells[1], name, lineno);
      const double v = parse_double(cells[2], name, lineno);
      if (r < 1 || c < 1) fail(name, lineno, "indices are 1-based");
      if (v < 0.0) fail(name, lineno, "counts must be nonnegative");
      entries.push_back({r - 1, c - 1, v});
      max_row = std::max(max_row, r);
      max_col = std::max(max_col, c);
    }
    if (entries.empty()) fail(name, lineno, "no entries in sparse design");
    DesignData out{CountDesign(max_row, max_col, entries), {}};
    out.feature_ids.reserve(max_col);
    for (std::int64_t j = 1; j <= max_col; ++j)
      out.feature_ids.push_back(std::to_string(j));
    return out;
  }

  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c].empty()) fail(name, 1, "empty feature id in header");
  std::vector<DesignEntry> entries;
  std::int64_t rows = 0;
  int lineno = 1;
  while (get_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      fail(name, lineno, "expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_double(cells[c], name, lineno);
      if (v < 0.0) fail(name, lineno, "counts must be nonnegative");
      if (v != 0.0)
        entries.push_back({rows, static_cast<std::int64_t>(c), v});
    }
    ++rows;
  }
  if (rows == 0) fail(name, lineno, "design has no sample rows");
  return {CountDesign(rows, static_cast<std::int64_t>(header.size()), entries),
          header};
}

Eigen::VectorXd read_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string name = path.string();
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (get_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && !parses_as_double(line)) continue;  // header
    values.push_back(parse_double(line, name, lineno));
  }
  if (values.empty()) fail(name, lineno ? lineno : 1, "no values");
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  const std::string name = path.string();
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (get_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (rows.empty() && width == 0) {
      const bool numeric = std::all_of(
          cells.begin(), cells.end(),
          [](const std::string& c) { return parses_as_double(c); });
      width = cells.size();
      if (!numeric) continue;  // header
    }
    if (cells.size() != width)
      fail(name, lineno, "expected " + std::to_string(width) +
                             " fields, got " + std::to_string(cells.size()));
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c)
      row[c] = parse_double(cells[c], name, lineno);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(name, lineno ? lineno : 1, "no matrix rows");
  Eigen::MatrixXd out(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) out(r, c) = rows[r][c];
  return out;
}

}  // namespace treeagg::io
