#include "byzclique/gapcheck.hpp"

#include <bit>

namespace byz {

namespace {

// Advance a size-k index combination (0-based, strictly increasing) in
// lexicographic order; false when exhausted.
bool next_combination(std::vector<int>& idx, int n) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

uint64_t mask_of(const std::vector<int>& idx) {
  uint64_t m = 0;
  for (int i : idx) m |= uint64_t{1} << i;
  return m;
}

bool covers(uint64_t s_mask, const std::vector<std::pair<int, int>>& d_edges) {
  for (auto [u, v] : d_edges) {
    if (!((s_mask >> (u - 1)) & 1u) && !((s_mask >> (v - 1)) & 1u)) return false;
  }
  return true;
}

}  // namespace

std::vector<uint64_t> enumerate_covers(const Graph& d, int b) {
  if (b < 0) throw std::invalid_argument("enumerate_covers: b < 0");
  int n = d.node_count();
  std::vector<uint64_t> out;
  if (b > n) return out;
  auto d_edges = d.edges();
  if (b == 0) {
    if (d_edges.empty()) out.push_back(0);
    return out;
  }
  std::vector<int> idx(b);
  for (int i = 0; i < b; ++i) idx[i] = i;
  do {
    uint64_t s = mask_of(idx);
    if (covers(s, d_edges)) out.push_back(s);
  } while (next_combination(idx, n));
  return out;
}

Graph rewrite(const Graph& agreement, uint64_t s_mask,
              const std::vector<std::pair<int, int>>& f) {
  int n = agreement.node_count();
  Graph g(n);
  for (auto [u, v] : agreement.edges()) {
    if (((s_mask >> (u - 1)) & 1u) || ((s_mask >> (v - 1)) & 1u)) continue;
    g.add_edge(u, v);
  }
  for (auto [u, v] : f) {
    if (!((s_mask >> (u - 1)) & 1u) && !((s_mask >> (v - 1)) & 1u))
      throw std::invalid_argument("rewrite: F pair has no endpoint in S");
    g.add_edge(u, v);
  }
  return g;
}

Decision measure_gap(const GapInstance& inst, GapWitness* witness, long long work_cap) {
  if (!inst.valid()) throw std::invalid_argument("measure_gap: invalid instance");
  const Graph& a = inst.view.agreement;
  const HereditaryClass& cls = *inst.cls;
  int n = inst.node_count();
  int b = inst.byzantine_count;
  long long work = 0;
  auto charge = [&](long long amount = 1) {
    work += amount;
    if (work > work_cap) throw GapInfeasibleError("measure_gap: work cap exceeded");
  };

  charge();
  if (membership(cls, a)) {
    if (witness) *witness = GapWitness{};
    return Decision::kAccept;
  }

  auto d_edges = inst.view.disagreement.edges();
  if (b == 0) return Decision::kReject;

  std::vector<int> idx(b);
  for (int i = 0; i < b; ++i) idx[i] = i;
  do {
    uint64_t s = mask_of(idx);
    if (!covers(s, d_edges)) continue;

    // Removing S leaves an induced subgraph of every candidate G^F; if
    // that subgraph is outside the class, heredity rules out all F.
    charge();
    if (!mask_membership(cls, a, a.full_mask() & ~s)) continue;

    // Candidate pairs: exactly those with at least one endpoint in S.
    std::vector<std::pair<int, int>> pairs;
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (((s >> (u - 1)) & 1u) || ((s >> (v - 1)) & 1u)) pairs.emplace_back(u, v);
      }
    }
    int k = static_cast<int>(pairs.size());
    Graph base = rewrite(a, s, {});

    // F by ascending popcount so the smallest witness is found first.
    for (int c = 0; c <= k; ++c) {
      std::vector<int> fidx(c);
      for (int i = 0; i < c; ++i) fidx[i] = i;
      bool more = c > 0 || true;
      do {
        Graph candidate = base;
        std::vector<std::pair<int, int>> f_edges;
        for (int i : fidx) {
          candidate.add_edge(pairs[i].first, pairs[i].second);
          f_edges.push_back(pairs[i]);
        }
        charge();
        if (membership(cls, candidate)) {
          if (witness) *witness = GapWitness{s, std::move(f_edges)};
          return Decision::kAccept;
        }
        more = c > 0 && next_combination(fidx, k);
      } while (more);
    }
  } while (next_combination(idx, n));

  return Decision::kReject;
}

}  // namespace byz
