#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "byzclique/engine.hpp"
#include "byzclique/graph.hpp"

namespace byz {

struct CommitteeParams {
  // committee_size = min(n, max(3, c0 * ceil(log2 n)))
  int c0 = 4;
  // per-node membership cap = max(committee_size, inverse_cap_c * ceil(log2 n)^2)
  int inverse_cap_c = 4;
};

int ceil_log2(int n);
int committee_size(int n, const CommitteeParams& p = {});

struct LeaderCommittee {
  std::vector<NodeId> members;
};

/// Identity tag for plan caching; every distinct assignment gets its own.
uint64_t next_assignment_uid();

struct CommitteeAssignment {
  int n = 0;
  std::vector<std::vector<NodeId>> comm;     // comm[v-1] = Comm(v), draw order
  std::vector<std::vector<NodeId>> inverse;  // inverse[w-1] = committees of w
  uint64_t uid = next_assignment_uid();
};

/// Pure function of the shared coin: every honest node derives the same list.
LeaderCommittee build_leader_committee(const RoundEngine& eng, const CommitteeParams& p = {});

/// Pure function of the shared coin: committee per node, with a deterministic
/// membership cap keeping every node in O(log^2 n) committees.
CommitteeAssignment sample_committees(const RoundEngine& eng, std::string_view label,
                                      const CommitteeParams& p = {});

/// Row node v presents to committee member w (adversary override point).
using RowProvider = std::function<uint64_t(NodeId v, NodeId member)>;

struct CommitteeStructure {
  CommitteeAssignment assign;
  // member_rows[v-1][j]: agreed row of v held by member assign.comm[v-1][j].
  std::vector<std::vector<uint64_t>> member_rows;

  int node_count() const { return assign.n; }
  /// Majority row over all members; equals the common honest value whenever
  /// the committee has an honest majority.
  uint64_t common_row(NodeId v) const;
  bool honest_members_agree(NodeId v, const std::set<NodeId>& byz) const;
  std::string debug_json() const;
};

/// Every committee must keep its Byzantine share below one third for the
/// in-committee agreement to be trustworthy (a ground-truth check).
bool assignment_valid(const CommitteeAssignment& a, const std::set<NodeId>& byz);

struct ConditionReport {
  bool honest_strong_majority = false;  // byz < m/3 per committee
  bool members_agree = false;           // identical rows across honest members
  bool honest_rows_exact = false;       // honest v: agreed row == true row
  bool size_bound = false;
  bool inverse_bound = false;
  bool all() const {
    return honest_strong_majority && members_agree && honest_rows_exact && size_bound &&
           inverse_bound;
  }
};
ConditionReport check_conditions(const CommitteeStructure& s, const Graph& g,
                                 const std::set<NodeId>& byz, const CommitteeParams& p = {});

/// Lockstep word exchange over a globally known plan: plan[i] = (from, to),
/// one word each, queued in plan order; finishes after max-link-load rounds.
/// Returns the delivered word per plan slot (0 where nothing arrived).
using Plan = std::vector<std::pair<NodeId, NodeId>>;
Proc<std::vector<uint64_t>> exchange_words(NodeApi& api, const Plan& plan,
                                           std::vector<uint64_t> words, int window = -1);

/// A plan plus per-slot tags and its precomputed round window. Plans are
/// identical across nodes, so they are built once per assignment and shared
/// (every node would otherwise rebuild the same vectors).
struct PlannedExchange {
  Plan plan;
  std::vector<std::array<int32_t, 3>> meta;  // call-site-specific slot tags
  int window = 0;
  // Per-node slot indices in plan order, so nodes touch only their own
  // slots instead of scanning the whole plan.
  std::vector<std::vector<uint32_t>> send_slots;
  std::vector<std::vector<uint32_t>> recv_slots;
};

using PlanBuilder = std::function<void(PlannedExchange&)>;

/// Fetch (or build and memoize) the exchange shape for (assignment, tag).
/// The builder must be a pure function of the assignment.
std::shared_ptr<const PlannedExchange> cached_exchange(const CommitteeAssignment& assign,
                                                       const std::string& tag,
                                                       const PlanBuilder& build);

/// Most repeated word in the reports; ties resolve to the smallest value.
uint64_t majority_word(const std::vector<uint64_t>& reports);

/// Lockstep exchange over a prebuilt shape: words[j] pairs with this node's
/// j-th send slot; the result pairs with its recv slots.
Proc<std::vector<uint64_t>> exchange_planned(NodeApi& api, const PlannedExchange& pe,
                                             std::vector<uint64_t> words);

/// Per-node program building the committee structure: distribute rows to
/// committees, then agree on each row bit batch by batch with phase-king.
/// `my_row(member)` is what this node claims to each member of its committee;
/// `known_byz` (global knowledge) bounds the agreement phase count.
/// Returns (v, agreed row) for every committee this node sits on.
Proc<std::vector<std::pair<NodeId, uint64_t>>> structure_program(
    NodeApi& api, const CommitteeAssignment& assign, int known_byz,
    std::function<uint64_t(NodeId member)> my_row);

/// Driver: run structure_program on every node of the engine. Honest v
/// reports g.row(v); Byzantine v reports byz_rows(v, member) when provided.
CommitteeStructure build_committee_structure(RoundEngine& eng, std::string_view label,
                                             const Graph& g, int known_byz,
                                             const CommitteeParams& p = {},
                                             const RowProvider& byz_rows = nullptr);

/// What a (Byzantine) relaying member reports instead of the held value.
using RelayLiar = std::function<uint64_t(NodeId member, NodeId u, NodeId v)>;

/// Per-node relay program: `held(u, v)` is the word this node holds as a
/// member of Comm(u) addressed to Comm(v). Returns received[u-1][v-1], the
/// majority-voted word for every pair (u, v) with this node in Comm(v)
/// (other slots 0).
Proc<std::vector<std::vector<uint64_t>>> relay_program(
    NodeApi& api, const CommitteeAssignment& assign,
    std::function<uint64_t(NodeId u, NodeId v)> held);

/// Driver for the relay: messages[u-1][v-1] is held identically by honest
/// members of Comm(u); Byzantine members lie per `liar`. Returns the full
/// per-node received matrix, result[w-1][u-1][v-1].
std::vector<std::vector<std::vector<uint64_t>>> committee_relay(
    RoundEngine& eng, const CommitteeAssignment& assign,
    const std::vector<std::vector<uint64_t>>& messages, const RelayLiar& liar = nullptr);

/// Per-node program: every member of Comm(u) sends `held(u)` (a fixed number
/// of words) to every node; each node majority-votes per word position.
/// Returns the voted words per u. This is the committee-to-everyone
/// primitive used by the reconstructions.
Proc<std::vector<std::vector<uint64_t>>> committee_broadcast_program(
    NodeApi& api, const CommitteeAssignment& assign, int words_per_value,
    std::function<std::vector<uint64_t>(NodeId u)> held);

}  // namespace byz
