#include "byzclique/classes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace byz {

namespace {

// --- mask-restricted membership on raw adjacency rows ---

bool forest_mask(const uint64_t* rows, int n, uint64_t mask) {
  // Union-find over the masked vertices; a repeated root means a cycle.
  int parent[Graph::kMaxNodes];
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int u = 0; u < n; ++u) {
    if (!((mask >> u) & 1u)) continue;
    uint64_t r = rows[u] & mask & ~((uint64_t{2} << u) - 1);  // v > u
    while (r) {
      int v = std::countr_zero(r);
      r &= r - 1;
      int ru = find(u), rv = find(v);
      if (ru == rv) return false;
      parent[ru] = rv;
    }
  }
  return true;
}

bool bipartite_mask(const uint64_t* rows, int n, uint64_t mask) {
  int color[Graph::kMaxNodes];
  for (int i = 0; i < n; ++i) color[i] = -1;
  int stack[Graph::kMaxNodes];
  for (int s = 0; s < n; ++s) {
    if (!((mask >> s) & 1u) || color[s] != -1) continue;
    color[s] = 0;
    int top = 0;
    stack[top++] = s;
    while (top) {
      int u = stack[--top];
      uint64_t r = rows[u] & mask;
      while (r) {
        int v = std::countr_zero(r);
        r &= r - 1;
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          stack[top++] = v;
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool triangle_free_mask(const uint64_t* rows, int n, uint64_t mask) {
  for (int u = 0; u < n; ++u) {
    if (!((mask >> u) & 1u)) continue;
    uint64_t r = rows[u] & mask & ~((uint64_t{2} << u) - 1);
    while (r) {
      int v = std::countr_zero(r);
      r &= r - 1;
      if (rows[u] & rows[v] & mask) return false;
    }
  }
  return true;
}

// Cluster graphs are exactly the P3-free graphs: every edge uv must have
// N(u) \ {v} == N(v) \ {u} within the mask.
bool cluster_mask(const uint64_t* rows, int n, uint64_t mask) {
  for (int u = 0; u < n; ++u) {
    if (!((mask >> u) & 1u)) continue;
    uint64_t r = rows[u] & mask & ~((uint64_t{2} << u) - 1);
    while (r) {
      int v = std::countr_zero(r);
      r &= r - 1;
      uint64_t diff = (rows[u] ^ rows[v]) & mask;
      diff &= ~((uint64_t{1} << u) | (uint64_t{1} << v));
      if (diff) return false;
    }
  }
  return true;
}

double log2_binomial(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::log(2.0);
}

// log2 of the number of edge sets of size at most cap among m slots.
double log2_edge_subsets_up_to(int m, int cap) {
  double best = 0.0;
  for (int k = 0; k <= std::min(cap, m); ++k) best = std::max(best, log2_binomial(m, k));
  return best + std::log2(std::min(cap, m) + 1.0);
}

double forests_growth(int n) {
  // (n-1)*log2(n) + log2(n): labeled forests are fewer than n^n.
  return n * std::log2(std::max(2, n));
}

double bipartite_growth(int n) {
  // At most 2^n bipartitions, each with at most n^2/4 edge slots.
  return n + n * n / 4.0;
}

double triangle_free_growth(int n) {
  // Mantel: a triangle-free graph has at most n^2/4 edges.
  return log2_edge_subsets_up_to(n * (n - 1) / 2, n * n / 4);
}

double cluster_growth(int n) {
  // Cluster graphs correspond to set partitions; Bell(n) <= n^n.
  return n * std::log2(std::max(2, n));
}

HereditaryClass make_builtin(std::string name,
                             bool (*mask_fn)(const uint64_t*, int, uint64_t),
                             double (*growth_fn)(int)) {
  HereditaryClass cls;
  cls.name = std::move(name);
  cls.mask_membership = mask_fn;
  cls.membership = [mask_fn](const Graph& g) {
    return mask_fn(g.rows().data(), g.node_count(), g.full_mask());
  };
  cls.growth_bits = [growth_fn](int n) { return growth_fn(n); };
  return cls;
}

}  // namespace

bool membership(const HereditaryClass& cls, const Graph& g) { return cls.membership(g); }

bool mask_membership(const HereditaryClass& cls, const Graph& g, uint64_t mask) {
  mask &= g.full_mask();
  if (cls.mask_membership) return cls.mask_membership(g.rows().data(), g.node_count(), mask);
  std::vector<int> keep;
  for (int u = 1; u <= g.node_count(); ++u) {
    if ((mask >> (u - 1)) & 1u) keep.push_back(u);
  }
  return cls.membership(g.induced(keep));
}

uint64_t enumerate_class_count(const HereditaryClass& cls, int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("enumerate_class_count: n out of range");
  int slots = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> slot_edges;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) slot_edges.emplace_back(u, v);
  uint64_t count = 0;
  uint64_t rows[Graph::kMaxNodes] = {};
  uint64_t mask = (uint64_t{1} << n) - 1;
  for (uint64_t bits = 0; bits < (uint64_t{1} << slots); ++bits) {
    for (int i = 0; i < n; ++i) rows[i] = 0;
    for (int s = 0; s < slots; ++s) {
      if ((bits >> s) & 1u) {
        auto [u, v] = slot_edges[s];
        rows[u - 1] |= uint64_t{1} << (v - 1);
        rows[v - 1] |= uint64_t{1} << (u - 1);
      }
    }
    bool in_class;
    if (cls.mask_membership) {
      in_class = cls.mask_membership(rows, n, mask);
    } else {
      Graph g(n);
      for (int s = 0; s < slots; ++s)
        if ((bits >> s) & 1u) g.add_edge(slot_edges[s].first, slot_edges[s].second);
      in_class = cls.membership(g);
    }
    if (in_class) ++count;
  }
  return count;
}

double class_growth_bits(const HereditaryClass& cls, int n) {
  if (n < 1) throw std::invalid_argument("class_growth_bits: n < 1");
  if (n <= 6) {
    static std::mutex mu;
    static std::map<std::pair<std::string, int>, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(cls.name, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double bits = std::log2(static_cast<double>(enumerate_class_count(cls, n)));
    cache[key] = bits;
    return bits;
  }
  return cls.growth_bits(n);
}

const HereditaryClass& forests_class() {
  static const HereditaryClass cls = make_builtin("forests", forest_mask, forests_growth);
  return cls;
}

const HereditaryClass& bipartite_class() {
  static const HereditaryClass cls = make_builtin("bipartite", bipartite_mask, bipartite_growth);
  return cls;
}

const HereditaryClass& triangle_free_class() {
  static const HereditaryClass cls =
      make_builtin("triangle-free", triangle_free_mask, triangle_free_growth);
  return cls;
}

const HereditaryClass& cluster_class() {
  static const HereditaryClass cls = make_builtin("cluster", cluster_mask, cluster_growth);
  return cls;
}

const std::vector<const HereditaryClass*>& builtin_classes() {
  static const std::vector<const HereditaryClass*> all = {
      &forests_class(), &bipartite_class(), &triangle_free_class(), &cluster_class()};
  return all;
}

const HereditaryClass& class_by_name(const std::string& name) {
  for (const auto* cls : builtin_classes()) {
    if (cls->name == name) return *cls;
  }
  throw std::invalid_argument("unknown class: " + name);
}

}  // namespace byz
