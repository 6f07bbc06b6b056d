#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gmim/common.hpp"
#include "gmim/io.hpp"

namespace gmim {

// Undirected attributed graph. Edges are stored canonically (u < v, sorted,
// deduplicated) and never contain self-loops; the encoder adds its own
// self-connections when it normalizes the propagator.
struct AttributedGraph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Matrix features;          // n_nodes x feature_dim
  std::vector<int> labels;  // empty when the dataset carries none
  int n_classes = 0;        // 0 when labels are absent

  bool has_labels() const { return !labels.empty(); }
  int feature_dim() const { return static_cast<int>(features.cols()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
};

inline void canonicalize_edges(std::vector<std::pair<int, int>>& edges) {
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// Dense symmetric 0/1 adjacency with zero diagonal.
inline Matrix adjacency(const AttributedGraph& g) {
  Matrix a = Matrix::Zero(g.n_nodes, g.n_nodes);
  for (const auto& [u, v] : g.edges) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

inline std::vector<int> node_degrees(const AttributedGraph& g) {
  std::vector<int> deg(g.n_nodes, 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

namespace detail {

inline std::pair<int, int> read_meta(const std::filesystem::path& file) {
  const auto lines = io::read_lines(file);
  int n_nodes = -1, n_features = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tok = io::split_tabs(lines[i]);
    if (tok.size() != 2)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": expected \"key\\tvalue\"");
    long v = io::parse_long(tok[1], file, i + 1);
    if (tok[0] == "n_nodes")
      n_nodes = static_cast<int>(v);
    else if (tok[0] == "n_features")
      n_features = static_cast<int>(v);
    else
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": unknown key \"" + tok[0] + "\"");
  }
  if (n_nodes < 0) throw io_error(file.string() + ": missing n_nodes");
  if (n_features < 0) throw io_error(file.string() + ": missing n_features");
  return {n_nodes, n_features};
}

inline std::vector<std::pair<int, int>> read_edges(const std::filesystem::path& file, int n_nodes) {
  std::vector<std::pair<int, int>> edges;
  const auto lines = io::read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tok = io::split_tabs(lines[i]);
    if (tok.size() != 2)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": expected \"u\\tv\"");
    long u = io::parse_long(tok[0], file, i + 1);
    long v = io::parse_long(tok[1], file, i + 1);
    if (u < 0 || u >= n_nodes || v < 0 || v >= n_nodes)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": endpoint out of range [0, " +
                     std::to_string(n_nodes) + ")");
    if (u == v)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": self-loops are not allowed");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  canonicalize_edges(edges);
  return edges;
}

inline Matrix read_features(const std::filesystem::path& file, int n_nodes, int n_features) {
  const auto lines = io::read_lines(file);
  Matrix x = Matrix::Zero(n_nodes, n_features);
  const bool sparse = !lines.empty() && lines[0] == "#sparse";
  if (sparse) {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto tok = io::split_tabs(lines[i]);
      if (tok.size() != 3)
        throw io_error(file.string() + ":" + std::to_string(i + 1) + ": expected \"i\\tj\\tvalue\"");
      long r = io::parse_long(tok[0], file, i + 1);
      long c = io::parse_long(tok[1], file, i + 1);
      if (r < 0 || r >= n_nodes || c < 0 || c >= n_features)
        throw io_error(file.string() + ":" + std::to_string(i + 1) + ": index out of range");
      x(r, c) = io::parse_double(tok[2], file, i + 1);
    }
    return x;
  }
  int row = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": empty line");
    }
    if (row >= n_nodes)
      throw io_error(file.string() + ": more than " + std::to_string(n_nodes) + " feature rows");
    const auto tok = io::split_tabs(lines[i]);
    if (static_cast<int>(tok.size()) != n_features)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": expected " +
                     std::to_string(n_features) + " values, got " + std::to_string(tok.size()));
    for (int j = 0; j < n_features; ++j) x(row, j) = io::parse_double(tok[j], file, i + 1);
    ++row;
  }
  if (row != n_nodes)
    throw io_error(file.string() + ": expected " + std::to_string(n_nodes) + " feature rows, got " +
                   std::to_string(row));
  return x;
}

}  // namespace detail

// Loads the plain-text graph directory:
//   meta.tsv      "n_nodes\t<N>" and "n_features\t<d>"
//   edges.tsv     one "u\tv" per line, 0-indexed
//   features.tsv  N dense rows, or "i\tj\tvalue" triplets after a "#sparse" line
//   labels.tsv    optional, one class id per line
inline AttributedGraph load_graph(const std::filesystem::path& dir) {
  AttributedGraph g;
  auto [n_nodes, n_features] = detail::read_meta(dir / "meta.tsv");
  g.n_nodes = n_nodes;
  g.edges = detail::read_edges(dir / "edges.tsv", n_nodes);
  g.features = detail::read_features(dir / "features.tsv", n_nodes, n_features);
  const auto labels_file = dir / "labels.tsv";
  if (std::filesystem::exists(labels_file)) {
    g.labels = io::read_labels_tsv(labels_file);
    if (static_cast<int>(g.labels.size()) != n_nodes)
      throw io_error(labels_file.string() + ": expected " + std::to_string(n_nodes) +
                     " labels, got " + std::to_string(g.labels.size()));
    g.n_classes = g.labels.empty() ? 0 : *std::max_element(g.labels.begin(), g.labels.end()) + 1;
  }
  return g;
}

inline void write_graph(const AttributedGraph& g, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = io::open_out(dir / "meta.tsv");
    out << "n_nodes\t" << g.n_nodes << "\nn_features\t" << g.feature_dim() << "\n";
  }
  {
    auto out = io::open_out(dir / "edges.tsv");
    for (const auto& [u, v] : g.edges) out << u << '\t' << v << '\n';
  }
  io::write_matrix_tsv(g.features, dir / "features.tsv");
  if (g.has_labels()) io::write_labels_tsv(g.labels, dir / "labels.tsv");
}

}  // namespace gmim
