#include "byzclique/adversary.hpp"

#include <stdexcept>

namespace byz {

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"honest-mimic", "fake-edge", "deny-edge",
                                              "committee-split", "random"};
  return names;
}

Strategy make_strategy(std::string_view name) {
  Strategy s;
  s.name = std::string(name);
  if (name == "honest-mimic") {
    s.fake_row = [](const Graph& g, const std::set<NodeId>&, NodeId v, NodeId) {
      return g.row(v);
    };
  } else if (name == "fake-edge") {
    // Byzantine nodes claim a clique among themselves.
    s.fake_row = [](const Graph& g, const std::set<NodeId>& byz, NodeId v, NodeId) {
      uint64_t row = g.row(v);
      for (NodeId w : byz)
        if (w != v) row |= uint64_t{1} << (w - 1);
      return row;
    };
  } else if (name == "deny-edge") {
    s.fake_row = [](const Graph&, const std::set<NodeId>&, NodeId, NodeId) {
      return uint64_t{0};
    };
  } else if (name == "committee-split") {
    // True row to even members, complemented row to odd members.
    s.fake_row = [](const Graph& g, const std::set<NodeId>&, NodeId v, NodeId member) {
      uint64_t row = g.row(v);
      if (member % 2 == 1) row = (~row & g.full_mask()) & ~(uint64_t{1} << (v - 1));
      return row;
    };
  } else if (name == "random") {
    s.raw = true;
  } else {
    throw std::invalid_argument("unknown strategy: " + std::string(name));
  }
  return s;
}

RowProvider bind_rows(const Strategy& s, const Graph& g, const std::set<NodeId>& byz) {
  if (!s.fake_row) return nullptr;
  auto fake = s.fake_row;
  Graph graph = g;
  std::set<NodeId> bset = byz;
  return [fake, graph, bset](NodeId v, NodeId member) { return fake(graph, bset, v, member); };
}

void install_raw_hook(const Strategy& s, RoundEngine& eng) {
  if (!s.raw) return;
  eng.set_raw_hook([](RoundEngine& e) {
    int n = e.n();
    uint64_t r = static_cast<uint64_t>(e.round());
    for (NodeId b : e.byzantine()) {
      for (NodeId to = 1; to <= n; ++to) {
        if (to == b) continue;
        uint64_t idx = (r * static_cast<uint64_t>(n) + b) * static_cast<uint64_t>(n) + to;
        e.adversary_put(b, to, e.shared_coin("random-adversary", idx));
      }
    }
  });
}

ScenarioPair indistinguishability_scenario(int f) {
  if (f < 1) throw std::invalid_argument("indistinguishability requires f >= 1");
  int n = 3 * (f + 1);
  ScenarioPair pair;
  pair.f = f;

  Graph g_no(n), g_yes(n);
  std::set<NodeId> byz_yes, byz_no;
  for (int i = 0; i <= f; ++i) {
    int v1 = 3 * i + 1, v2 = 3 * i + 2, v3 = 3 * i + 3;
    g_no.add_edge(v1, v2);
    g_no.add_edge(v2, v3);
    g_no.add_edge(v3, v1);
    g_yes.add_edge(v2, v3);
    g_yes.add_edge(v3, v1);
    byz_yes.insert(v1);  // claims the missing {v1, v2}
    byz_no.insert(v2);   // denies the present {v1, v2}
  }

  pair.yes.g = g_yes;
  pair.yes.byz = byz_yes;
  pair.yes.rows = [g_yes](NodeId v, NodeId) {
    // v = v1 of its triangle; pretend the edge to v+1 exists.
    return g_yes.row(v) | (uint64_t{1} << v);
  };

  pair.no.g = g_no;
  pair.no.byz = byz_no;
  pair.no.rows = [g_no](NodeId v, NodeId) {
    // v = v2 of its triangle; pretend the edge to v-1 is absent.
    return g_no.row(v) & ~(uint64_t{1} << (v - 2));
  };
  return pair;
}

bool assert_indistinguishable(const ScenarioPair& pair, uint64_t seed, const ProtocolBody& body) {
  int n = pair.yes.g.node_count();
  RoundEngine yes({.n = n, .seed = seed, .byzantine = pair.yes.byz});
  RoundEngine no({.n = n, .seed = seed, .byzantine = pair.no.byz});
  body(yes, pair.yes.g, pair.yes.rows, pair.f + 1);
  body(no, pair.no.g, pair.no.rows, pair.f + 1);

  for (NodeId v = 1; v <= n; ++v) {
    bool honest_somewhere = !pair.yes.byz.count(v) || !pair.no.byz.count(v);
    if (!honest_somewhere) continue;
    if (yes.transcript().projection(v) != no.transcript().projection(v)) return false;
  }
  return true;
}

}  // namespace byz
