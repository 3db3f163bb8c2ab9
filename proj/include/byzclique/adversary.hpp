#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>

#include "byzclique/committees.hpp"
#include "byzclique/engine.hpp"
#include "byzclique/graph.hpp"

namespace byz {

/// A named full-knowledge Byzantine behavior. Input-faking strategies are
/// expressed as the row each Byzantine node presents to each committee
/// member (it then follows the honest program on the faked input); the raw
/// strategy garbles every Byzantine-sourced word on the wire instead.
struct Strategy {
  std::string name;
  bool raw = false;
  std::function<uint64_t(const Graph& g, const std::set<NodeId>& byz, NodeId v, NodeId member)>
      fake_row;
};

/// names: honest-mimic, fake-edge, deny-edge, committee-split, random.
Strategy make_strategy(std::string_view name);
const std::vector<std::string>& strategy_names();

/// Bind the input-faking rule to a concrete scenario (null when the
/// strategy leaves inputs honest).
RowProvider bind_rows(const Strategy& s, const Graph& g, const std::set<NodeId>& byz);

/// Install the raw wire hook when the strategy needs one (no-op otherwise).
void install_raw_hook(const Strategy& s, RoundEngine& eng);

/// One side of the impossibility construction: the graph, the Byzantine
/// placement, and the lying rule.
struct SideScenario {
  Graph g{1};
  std::set<NodeId> byz;
  RowProvider rows;
};

/// The yes side is a forest (f+1 paths) whose Byzantine nodes claim the
/// missing triangle edges; the no side is f+1 disjoint triangles whose
/// Byzantine nodes deny those same edges. Effective inputs coincide.
struct ScenarioPair {
  int f = 1;
  SideScenario yes;
  SideScenario no;
};

ScenarioPair indistinguishability_scenario(int f);

/// Any honest per-node computation to subject to the pair: it must drive
/// the given engine itself (the Byzantine inputs are the bound rows).
using ProtocolBody =
    std::function<void(RoundEngine& eng, const Graph& g, const RowProvider& rows, int b)>;

/// Run both sides with the same seed and compare the transcript projection
/// of every node that is honest on either side. True iff all projections
/// are bit-identical, which forces identical honest outputs.
bool assert_indistinguishable(const ScenarioPair& pair, uint64_t seed, const ProtocolBody& body);

}  // namespace byz
