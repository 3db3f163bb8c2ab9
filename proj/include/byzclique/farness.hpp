#pragma once

#include <cstdint>
#include <vector>

#include "byzclique/classes.hpp"
#include "byzclique/graph.hpp"

namespace byz {

/// Default node-count cap for the exhaustive farness oracle.
inline constexpr int kFarnessNodeCap = 12;

/// Ground-truth oracle: true iff g contains at least f+1 vertex-disjoint
/// induced subgraphs each failing membership in cls. Exhaustive search;
/// throws std::invalid_argument when g exceeds the brute-force cap.
bool is_f_far(const Graph& g, const HereditaryClass& cls, int f, int node_cap = kFarnessNodeCap);

/// Vertex masks of all minimal non-member subsets of g (non-member whose
/// every one-vertex-deleted subset is a member). Exposed for tests.
std::vector<uint64_t> minimal_violators(const Graph& g, const HereditaryClass& cls);

}  // namespace byz
