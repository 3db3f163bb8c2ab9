#pragma once

#include <cstdint>
#include <vector>

namespace byz {

/// One committee member's state in the phase-king agreement protocol,
/// running k binary instances in lockstep (bit i of every payload belongs
/// to instance i). Tolerates f faults out of m members when 3f < m.
///
/// The schedule is 3(f+1) broadcast rounds. At round r the member
/// broadcasts outgoing(r) to the whole committee, then feeds what it
/// received into deliver(r). After the last deliver, decision() holds the
/// agreed bitmask. The class is transport-agnostic and deterministic.
class PhaseKingNode {
 public:
  /// m members (indices 0..m-1), this node is `self`, at most `faults`
  /// faulty members, k instances with initial values `initial` (low k bits).
  PhaseKingNode(int m, int self, int faults, int k, uint64_t initial);

  int total_rounds() const { return 3 * (faults_ + 1); }
  /// King of phase p, by rotation.
  int king_of(int phase) const { return phase % m_; }
  /// True when this node is the designated broadcaster of round r (all
  /// members in value/propose rounds, only the king in king rounds).
  bool speaks(int round) const;

  /// Payload to broadcast at round r. Value rounds carry k value bits,
  /// propose rounds carry 2k bits (low k: propose-1, high k: propose-0),
  /// king rounds carry k value bits.
  uint64_t outgoing(int round) const;

  /// Consume round r receipts: payloads[j] is member j's word, meaningful
  /// only where bit j of `present` is set. Rounds must be delivered in
  /// order 0, 1, ..., total_rounds()-1.
  void deliver(int round, const std::vector<uint64_t>& payloads, uint64_t present);

  /// Agreed values, one bit per instance; valid once all rounds delivered.
  uint64_t decision() const;

  int instance_count() const { return k_; }

  /// Diagnostic: a value determined by the full mutable state, letting
  /// exhaustive searches deduplicate equivalent branches.
  uint64_t state_fingerprint() const {
    return value_ ^ (propose_out_ << 8) ^ (strong_ << 24) ^
           (static_cast<uint64_t>(next_round_) << 40);
  }

 private:
  int m_, self_, faults_, k_;
  uint64_t value_;        // current estimate, k bits
  uint64_t propose_out_;  // staged propose payload, 2k bits
  uint64_t strong_;       // instances locked against the king this phase
  int next_round_ = 0;
};

}  // namespace byz
