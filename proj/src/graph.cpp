#include "byzclique/graph.hpp"

#include <bit>
#include <sstream>

namespace byz {

void Graph::set_row(int u, uint64_t bits) {
  check_node(u);
  bits &= full_mask() & ~(uint64_t{1} << (u - 1));
  for (int v = 1; v <= n_; ++v) {
    if (v == u) continue;
    if ((bits >> (v - 1)) & 1u) {
      add_edge(u, v);
    } else {
      remove_edge(u, v);
    }
  }
}

int Graph::degree(int u) const { return std::popcount(row(u)); }

int Graph::edge_count() const {
  int total = 0;
  for (uint64_t r : adj_) total += std::popcount(r);
  return total / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 1; u <= n_; ++u) {
    uint64_t r = adj_[u - 1] >> u;  // neighbors v > u
    while (r) {
      int v = u + 1 + std::countr_zero(r);
      out.emplace_back(u, v);
      r &= r - 1;
    }
  }
  return out;
}

Graph Graph::induced(const std::vector<int>& s) const {
  Graph g(static_cast<int>(s.size()));
  for (size_t i = 0; i < s.size(); ++i) {
    check_node(s[i]);
    for (size_t j = i + 1; j < s.size(); ++j) {
      if (has_edge(s[i], s[j])) g.add_edge(static_cast<int>(i) + 1, static_cast<int>(j) + 1);
    }
  }
  return g;
}

Graph Graph::read_edge_list(std::istream& in) {
  std::string line;
  int n = -1;
  Graph g;
  while (std::getline(in, line)) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream ls(line.substr(start));
    if (n < 0) {
      if (!(ls >> n) || n < 0) throw std::invalid_argument("edge list: bad node count line");
      g = Graph(n);
      continue;
    }
    int u, v;
    if (!(ls >> u >> v)) throw std::invalid_argument("edge list: bad edge line: " + line);
    g.add_edge(u, v);
  }
  if (n < 0) throw std::invalid_argument("edge list: empty input");
  return g;
}

Graph Graph::parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

void Graph::write_edge_list(std::ostream& out) const {
  out << n_ << "\n";
  for (auto [u, v] : edges()) out << u << " " << v << "\n";
}

std::string Graph::to_edge_list() const {
  std::ostringstream out;
  write_edge_list(out);
  return out.str();
}

}  // namespace byz
