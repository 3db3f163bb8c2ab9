#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace byz {

/// Labeled undirected simple graph on node IDs 1..n, n <= 64.
/// Adjacency is kept as one 64-bit row per node; bit (v-1) of row(u)
/// is set iff {u,v} is an edge.
class Graph {
 public:
  static constexpr int kMaxNodes = 64;

  Graph() : n_(0) {}
  explicit Graph(int n) : n_(n), adj_(static_cast<size_t>(check_n(n))) {}

  int node_count() const { return n_; }

  bool has_edge(int u, int v) const {
    check_node(u);
    check_node(v);
    return u != v && (adj_[u - 1] >> (v - 1)) & 1u;
  }

  void add_edge(int u, int v) {
    check_node(u);
    check_node(v);
    if (u == v) throw std::invalid_argument("self-loop");
    adj_[u - 1] |= uint64_t{1} << (v - 1);
    adj_[v - 1] |= uint64_t{1} << (u - 1);
  }

  void remove_edge(int u, int v) {
    check_node(u);
    check_node(v);
    adj_[u - 1] &= ~(uint64_t{1} << (v - 1));
    adj_[v - 1] &= ~(uint64_t{1} << (u - 1));
  }

  /// Neighbor bitmask of u; bit (v-1) set iff {u,v} in E.
  uint64_t row(int u) const {
    check_node(u);
    return adj_[u - 1];
  }

  /// Overwrite the full adjacency row of u (symmetrized).
  void set_row(int u, uint64_t bits);

  const std::vector<uint64_t>& rows() const { return adj_; }

  int degree(int u) const;
  int edge_count() const;
  std::vector<std::pair<int, int>> edges() const;

  /// Induced subgraph on the given nodes, relabeled 1..|s| in the
  /// order they appear in s.
  Graph induced(const std::vector<int>& s) const;

  /// Mask with bits 0..n-1 set.
  uint64_t full_mask() const {
    return n_ == 64 ? ~uint64_t{0} : (uint64_t{1} << n_) - 1;
  }

  bool operator==(const Graph& o) const = default;

  /// Edge-list format: first line `n`, then one `u v` pair per line,
  /// 1-based; lines starting with `#` are ignored.
  static Graph read_edge_list(std::istream& in);
  static Graph parse_edge_list(const std::string& text);
  void write_edge_list(std::ostream& out) const;
  std::string to_edge_list() const;

 private:
  static int check_n(int n) {
    if (n < 0 || n > kMaxNodes) throw std::invalid_argument("node count out of range");
    return n;
  }
  void check_node(int u) const {
    if (u < 1 || u > n_) throw std::out_of_range("node ID out of range");
  }

  int n_;
  std::vector<uint64_t> adj_;
};

}  // namespace byz
