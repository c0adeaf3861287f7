#include "hgcl/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgcl/errors.hpp"

namespace hgcl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const fs::path& file, std::size_t line, const std::string& what) {
  throw DatasetError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const fs::path& file, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(file, line, "cannot parse number '" + s + "'");
  if (!std::isfinite(v)) fail(file, line, "non-finite attribute value '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const fs::path& file, std::size_t line) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(file, line, "cannot parse integer '" + s + "'");
  return v;
}

std::ifstream open_or_fail(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DatasetError(file.string() + ": missing file");
  return in;
}

struct NodeTable {
  std::size_t count = 0;
  Matrix attributes;
  std::vector<int> labels;  // empty when the file has no label column
};

NodeTable read_nodes(const fs::path& file) {
  std::ifstream in = open_or_fail(file);
  std::string line;
  if (!std::getline(in, line)) fail(file, 1, "empty file, header row required");
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "node_index")
    fail(file, 1, "header must start with 'node_index'");
  const bool has_label = header.size() > 1 && header[1] == "label";
  const std::size_t feat_start = has_label ? 2 : 1;
  const std::size_t dim = header.size() - feat_start;

  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  std::vector<long> indices;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      fail(file, lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()));
    indices.push_back(parse_long(cells[0], file, lineno));
    if (has_label) labels.push_back(static_cast<int>(parse_long(cells[1], file, lineno)));
    std::vector<double> row(dim);
    for (std::size_t j = 0; j < dim; ++j)
      row[j] = parse_double(cells[feat_start + j], file, lineno);
    feats.push_back(std::move(row));
  }
  const std::size_t n = feats.size();
  // rows must form a permutation of 0..n-1
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    const long idx = indices[r];
    if (idx < 0 || static_cast<std::size_t>(idx) >= n || seen[idx])
      fail(file, r + 2, "node_index values must form a permutation of 0.." +
                            std::to_string(n == 0 ? 0 : n - 1));
    seen[idx] = 1;
  }
  NodeTable t;
  t.count = n;
  t.attributes = Matrix(n, dim);
  if (has_label) t.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto idx = static_cast<std::size_t>(indices[r]);
    for (std::size_t j = 0; j < dim; ++j) t.attributes(idx, j) = feats[r][j];
    if (has_label) t.labels[idx] = labels[r];
  }
  return t;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> read_edges(
    const fs::path& file, std::size_t n_src, std::size_t n_dst) {
  std::ifstream in = open_or_fail(file);
  std::string line;
  if (!std::getline(in, line)) fail(file, 1, "empty file, header row required");
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "src" || header[1] != "dst")
    fail(file, 1, "header must be 'src,dst'");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) fail(file, lineno, "expected 2 columns");
    const long s = parse_long(cells[0], file, lineno);
    const long d = parse_long(cells[1], file, lineno);
    if (s < 0 || static_cast<std::size_t>(s) >= n_src)
      fail(file, lineno, "src index out of range: " + cells[0] + " (type has " +
                             std::to_string(n_src) + " nodes)");
    if (d < 0 || static_cast<std::size_t>(d) >= n_dst)
      fail(file, lineno, "dst index out of range: " + cells[1] + " (type has " +
                             std::to_string(n_dst) + " nodes)");
    edges.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(d));
  }
  return edges;
}

}  // namespace

HeteroGraph load_graph(const fs::path& dir) {
  const fs::path schema_file = dir / "schema.json";
  std::ifstream schema_in = open_or_fail(schema_file);
  json schema;
  try {
    schema_in >> schema;
  } catch (const json::exception& e) {
    throw DatasetError(schema_file.string() + ": invalid JSON: " + e.what());
  }

  HeteroGraph g;
  try {
    g.node_types = schema.at("node_types").get<std::vector<std::string>>();
    g.target_type = schema.at("target_type").get<std::string>();
    for (const auto& r : schema.at("relations")) {
      Relation rel;
      rel.name = r.at("name").get<std::string>();
      rel.src_type = r.at("src").get<std::string>();
      rel.dst_type = r.at("dst").get<std::string>();
      g.relations.push_back(std::move(rel));
    }
    if (schema.contains("meta_paths")) {
      for (const auto& m : schema.at("meta_paths")) {
        MetaPath mp;
        mp.name = m.at("name").get<std::string>();
        mp.type_sequence = m.at("types").get<std::vector<std::string>>();
        mp.relation_sequence = m.at("relations").get<std::vector<std::string>>();
        g.meta_paths.push_back(std::move(mp));
      }
    }
  } catch (const json::exception& e) {
    throw DatasetError(schema_file.string() + ": schema error: " + e.what());
  }

  for (const std::string& type : g.node_types) {
    const fs::path file = dir / ("nodes_" + type + ".csv");
    NodeTable t = read_nodes(file);
    g.node_counts.push_back(t.count);
    g.attributes.push_back(std::move(t.attributes));
    if (!t.labels.empty()) {
      if (type != g.target_type)
        throw DatasetError(file.string() + ": label column only allowed on the target type");
      g.labels = std::move(t.labels);
    }
  }

  for (Relation& rel : g.relations) {
    const fs::path file = dir / ("edges_" + rel.name + ".csv");
    rel.edges = read_edges(file, g.node_counts[g.type_index(rel.src_type)],
                           g.node_counts[g.type_index(rel.dst_type)]);
  }

  validate(g);
  return g;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

void save_graph(const HeteroGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  json schema;
  schema["node_types"] = g.node_types;
  schema["target_type"] = g.target_type;
  schema["relations"] = json::array();
  for (const Relation& r : g.relations)
    schema["relations"].push_back({{"name", r.name}, {"src", r.src_type}, {"dst", r.dst_type}});
  schema["meta_paths"] = json::array();
  for (const MetaPath& m : g.meta_paths)
    schema["meta_paths"].push_back(
        {{"name", m.name}, {"types", m.type_sequence}, {"relations", m.relation_sequence}});
  {
    std::ofstream out(dir / "schema.json");
    if (!out) throw IoError("cannot write " + (dir / "schema.json").string());
    out << schema.dump(2) << "\n";
  }

  const std::size_t target = g.type_index(g.target_type);
  for (std::size_t t = 0; t < g.node_types.size(); ++t) {
    const fs::path file = dir / ("nodes_" + g.node_types[t] + ".csv");
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    const bool with_labels = t == target && g.has_labels();
    const Matrix& x = g.attributes[t];
    out << "node_index";
    if (with_labels) out << ",label";
    for (std::size_t j = 0; j < x.cols(); ++j) out << ",f" << j;
    out << "\n";
    for (std::size_t i = 0; i < x.rows(); ++i) {
      out << i;
      if (with_labels) out << "," << g.labels[i];
      for (std::size_t j = 0; j < x.cols(); ++j) out << "," << format_double(x(i, j));
      out << "\n";
    }
  }

  for (const Relation& r : g.relations) {
    const fs::path file = dir / ("edges_" + r.name + ".csv");
    std::ofstream out(file);
    if (!out) throw IoError("cannot write " + file.string());
    out << "src,dst\n";
    for (const auto& [s, d] : r.edges) out << s << "," << d << "\n";
  }
}

}  // namespace hgcl
