#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "byzclique/graph.hpp"

namespace byz {

/// A hereditary graph class: membership predicate plus an upper bound on
/// the growth log2|G_n| in bits (used for round budgeting only).
struct HereditaryClass {
  std::string name;
  std::function<bool(const Graph&)> membership;
  std::function<double(int)> growth_bits;

  /// Fast path for the built-in classes: membership of the subgraph
  /// spanned by the vertices in `mask`, on raw adjacency rows. Null for
  /// user-defined classes.
  bool (*mask_membership)(const uint64_t* rows, int n, uint64_t mask) = nullptr;
};

bool membership(const HereditaryClass& cls, const Graph& g);

/// Membership of the subgraph induced by the vertex mask (vertices
/// outside `mask` are ignored). Falls back to relabeled induced
/// subgraphs when no fast path exists.
bool mask_membership(const HereditaryClass& cls, const Graph& g, uint64_t mask);

/// Upper bound on log2|G_n| in bits. For n <= 6 this is the exact
/// enumerated value; beyond that, a documented closed-form bound.
double class_growth_bits(const HereditaryClass& cls, int n);

/// Exact number of labeled n-node members, by enumeration over all
/// 2^C(n,2) graphs. Intended for n <= 6.
uint64_t enumerate_class_count(const HereditaryClass& cls, int n);

/// Built-in classes.
const HereditaryClass& forests_class();
const HereditaryClass& bipartite_class();
const HereditaryClass& triangle_free_class();
const HereditaryClass& cluster_class();

const std::vector<const HereditaryClass*>& builtin_classes();
const HereditaryClass& class_by_name(const std::string& name);

}  // namespace byz
