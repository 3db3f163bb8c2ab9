#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "byzclique/graph.hpp"

namespace byztest {

inline byz::Graph make_path(int n) {
  byz::Graph g(n);
  for (int u = 1; u < n; ++u) g.add_edge(u, u + 1);
  return g;
}

inline byz::Graph make_cycle(int n) {
  byz::Graph g = make_path(n);
  if (n >= 3) g.add_edge(n, 1);
  return g;
}

inline byz::Graph make_triangles(int count) {
  byz::Graph g(3 * count);
  for (int i = 0; i < count; ++i) {
    int base = 3 * i;
    g.add_edge(base + 1, base + 2);
    g.add_edge(base + 2, base + 3);
    g.add_edge(base + 3, base + 1);
  }
  return g;
}

inline byz::Graph make_complete(int n) {
  byz::Graph g(n);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) g.add_edge(u, v);
  return g;
}

inline byz::Graph random_graph(std::mt19937_64& rng, int n, double p) {
  byz::Graph g(n);
  std::bernoulli_distribution edge(p);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (edge(rng)) g.add_edge(u, v);
  return g;
}

inline byz::Graph relabel(const byz::Graph& g, const std::vector<int>& perm) {
  byz::Graph out(g.node_count());
  for (auto [u, v] : g.edges()) out.add_edge(perm[u - 1], perm[v - 1]);
  return out;
}

}  // namespace byztest
