#include "byzclique/phase_king.hpp"

#include <stdexcept>

namespace byz {

PhaseKingNode::PhaseKingNode(int m, int self, int faults, int k, uint64_t initial)
    : m_(m), self_(self), faults_(faults), k_(k) {
  if (m < 1 || m > 64) throw std::invalid_argument("phase king: m out of range");
  if (self < 0 || self >= m) throw std::invalid_argument("phase king: bad self index");
  if (faults < 0 || 3 * faults >= m)
    throw std::invalid_argument("phase king: requires 3f < m");
  if (k < 1 || k > 32) throw std::invalid_argument("phase king: k out of range");
  uint64_t kmask = (k == 64) ? ~uint64_t{0} : (uint64_t{1} << k) - 1;
  value_ = initial & kmask;
  propose_out_ = 0;
  strong_ = 0;
}

bool PhaseKingNode::speaks(int round) const {
  if (round % 3 != 2) return true;
  return king_of(round / 3) == self_;
}

uint64_t PhaseKingNode::outgoing(int round) const {
  switch (round % 3) {
    case 0:
      return value_;
    case 1:
      return propose_out_;
    default:
      return value_;
  }
}

void PhaseKingNode::deliver(int round, const std::vector<uint64_t>& payloads, uint64_t present) {
  if (round != next_round_ || round >= total_rounds())
    throw std::logic_error("phase king: rounds must be delivered in order");
  if (static_cast<int>(payloads.size()) != m_)
    throw std::invalid_argument("phase king: one payload slot per member");
  ++next_round_;

  switch (round % 3) {
    case 0: {
      // Value round: stage proposals for values seen at least m-f times.
      propose_out_ = 0;
      for (int i = 0; i < k_; ++i) {
        int ones = 0, zeros = 0;
        for (int j = 0; j < m_; ++j) {
          if (!((present >> j) & 1u)) continue;
          ((payloads[j] >> i) & 1u) ? ++ones : ++zeros;
        }
        if (ones >= m_ - faults_) propose_out_ |= uint64_t{1} << i;
        if (zeros >= m_ - faults_) propose_out_ |= uint64_t{1} << (k_ + i);
      }
      break;
    }
    case 1: {
      // Propose round: adopt a value proposed more than f times; lock it
      // against the king when proposed at least m-f times. At most one
      // value can clear the f threshold when 3f < m.
      strong_ = 0;
      for (int i = 0; i < k_; ++i) {
        int p1 = 0, p0 = 0;
        for (int j = 0; j < m_; ++j) {
          if (!((present >> j) & 1u)) continue;
          if ((payloads[j] >> i) & 1u) ++p1;
          if ((payloads[j] >> (k_ + i)) & 1u) ++p0;
        }
        if (p1 > faults_)
          value_ |= uint64_t{1} << i;
        else if (p0 > faults_)
          value_ &= ~(uint64_t{1} << i);
        int mine = ((value_ >> i) & 1u) ? p1 : p0;
        if (mine >= m_ - faults_) strong_ |= uint64_t{1} << i;
      }
      break;
    }
    default: {
      // King round: unlocked instances adopt the king's word (0 if silent).
      int king = king_of(round / 3);
      uint64_t kings_word = ((present >> king) & 1u) ? payloads[king] : 0;
      value_ = (value_ & strong_) | (kings_word & ~strong_);
      uint64_t kmask = (uint64_t{1} << k_) - 1;
      value_ &= kmask;
      break;
    }
  }
}

uint64_t PhaseKingNode::decision() const {
  if (next_round_ != total_rounds())
    throw std::logic_error("phase king: decision requested before completion");
  return value_;
}

}  // namespace byz
