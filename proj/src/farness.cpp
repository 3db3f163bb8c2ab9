#include "byzclique/farness.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace byz {

namespace {

// Can we pick `need` pairwise disjoint masks from violators[from..]?
// Violators are sorted by popcount, so the remaining-capacity prune below
// is valid.
bool pack_disjoint(const std::vector<uint64_t>& violators, size_t from, uint64_t used, int need,
                   int free_vertices, int smallest_size) {
  if (need == 0) return true;
  if (free_vertices < need * smallest_size) return false;
  for (size_t i = from; i < violators.size(); ++i) {
    uint64_t v = violators[i];
    if (v & used) continue;
    if (pack_disjoint(violators, i + 1, used | v, need - 1,
                      free_vertices - std::popcount(v), smallest_size))
      return true;
  }
  return false;
}

}  // namespace

std::vector<uint64_t> minimal_violators(const Graph& g, const HereditaryClass& cls) {
  int n = g.node_count();
  std::vector<uint64_t> result;
  std::vector<char> is_member(uint64_t{1} << n);
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    is_member[mask] = mask_membership(cls, g, mask);
  }
  for (uint64_t mask = 1; mask < (uint64_t{1} << n); ++mask) {
    if (is_member[mask]) continue;
    bool minimal = true;
    uint64_t bits = mask;
    while (bits) {
      uint64_t low = bits & (~bits + 1);
      bits ^= low;
      if (!is_member[mask ^ low]) {
        minimal = false;
        break;
      }
    }
    if (minimal) result.push_back(mask);
  }
  std::sort(result.begin(), result.end(),
            [](uint64_t a, uint64_t b) { return std::popcount(a) < std::popcount(b); });
  return result;
}

bool is_f_far(const Graph& g, const HereditaryClass& cls, int f, int node_cap) {
  if (f < 0) throw std::invalid_argument("is_f_far: f must be >= 0");
  int n = g.node_count();
  if (n > node_cap) throw std::invalid_argument("is_f_far: graph exceeds brute-force cap");
  auto violators = minimal_violators(g, cls);
  if (violators.empty()) return false;
  int smallest = std::popcount(violators.front());
  if (static_cast<long long>(f + 1) * smallest > n) return false;
  return pack_disjoint(violators, 0, 0, f + 1, n, smallest);
}

}  // namespace byz
