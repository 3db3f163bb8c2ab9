#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "byzclique/classes.hpp"
#include "byzclique/committees.hpp"
#include "byzclique/engine.hpp"
#include "byzclique/view.hpp"

namespace byz {

/// Omniscient oracle: agreement/disagreement edges straight from the agreed
/// committee bits (majority row per committee). Not a protocol step.
AgreementView ground_truth_view(const CommitteeStructure& s);

/// Cross-committee bit exchange: after it, a member of Comm(v) knows c_u(v)
/// for every u (majority-voted over Comm(u), with the n bits of each row
/// batched into words). Returns other_bits[v-1] = bitmask over u; the slots
/// for committees this node serves on are the ones the protocol relies on.
/// `my_row_of(v)` is the agreed row this node holds as a member of Comm(v).
Proc<std::vector<uint64_t>> cross_bits_program(NodeApi& api, const CommitteeAssignment& assign,
                                               std::function<uint64_t(NodeId)> my_row_of);

struct DisagreementOutcome {
  Graph d{1};
  bool truncated = false;       // some broadcast list exceeded |B| (flagged run)
  std::vector<int> degrees;     // majority-voted d_D(u), 1-based offset 0
};

/// Reconstruct the disagreement graph at this node: committees publish
/// disagreement degrees, low-degree nodes' committees publish all incident
/// disagreement edges, high-degree nodes' committees publish only edges into
/// other high-degree nodes (at most |B|, truncated and flagged beyond).
Proc<DisagreementOutcome> disagreement_program(NodeApi& api, const CommitteeAssignment& assign,
                                               int b,
                                               std::function<uint64_t(NodeId)> my_row_of,
                                               std::vector<uint64_t> other_bits);

enum class AgreementBackend { kBroadcast, kClassIndex };

struct AgreementOutcome {
  bool rejected = false;
  Graph a{1};  // meaningful when !rejected
};

/// Reconstruct the agreement graph. Broadcast backend: committees publish
/// agreed A-rows, always reconstructs. Class-index backend (n <= 8):
/// committees relay A-rows to Comm(1), which transmits the index of G_A in
/// the enumerated blow-up family, or a reject sentinel when G_A is outside
/// the family (which certifies the input graph is outside the class).
Proc<AgreementOutcome> agreement_program(NodeApi& api, const CommitteeAssignment& assign, int b,
                                         const HereditaryClass* cls, AgreementBackend backend,
                                         std::function<uint64_t(NodeId)> my_row_of,
                                         std::vector<uint64_t> other_bits);

/// Rows a given node holds as a committee member, pulled from the built
/// structure (lookup function valid for every v whose committee it sits on).
std::function<uint64_t(NodeId)> rows_held_by(const CommitteeStructure& s, NodeId w);

/// Drivers running cross exchange + program on every node of the engine,
/// with each node's held rows taken from the built structure.
std::vector<DisagreementOutcome> reconstruct_disagreement(RoundEngine& eng,
                                                          const CommitteeStructure& s, int b);
std::vector<AgreementOutcome> reconstruct_agreement(RoundEngine& eng, const CommitteeStructure& s,
                                                    int b, const HereditaryClass& cls,
                                                    AgreementBackend backend);

/// The analytic cardinality bound on the blow-up family, in bits:
/// growth(class, n) + log2 C(n, b) + b*n.
double class_blowup_bound(const HereditaryClass& cls, int n, int b);

/// Edge-mask encoding of a graph: bit index of pair (u < v) in column-major
/// order over C(n,2) pairs.
uint64_t graph_mask(const Graph& g);
Graph graph_from_mask(uint64_t mask, int n);

struct BlowupBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustively enumerate the blow-up family: every graph obtainable as an
/// agreement graph when the true graph is in the class and at most b
/// Byzantine nodes drop incident edges or invent edges among themselves.
/// Sorted edge-mask encodings; n <= 7 (budget-guarded).
std::vector<uint64_t> enumerate_blowup(const HereditaryClass& cls, int n, int b);

/// Word counts per node for the two agreement backends at the given size,
/// used to exhibit the compression of the index encoding.
int broadcast_words_per_node(int n, int word_bits);
int class_index_words_per_node(const HereditaryClass& cls, int n, int b, int word_bits);

}  // namespace byz
