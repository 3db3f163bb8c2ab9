#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "byzclique/phase_king.hpp"

namespace byztest {

// Pure-core phase-king world: honest members run PhaseKingNode, Byzantine
// payloads are chosen by the caller per round and per honest receiver.
struct HonestSet {
  int m;
  std::vector<int> honest;  // member indices
  std::vector<byz::PhaseKingNode> nodes;

  HonestSet(int m_, const std::set<int>& byz, int f, int k, const std::vector<uint64_t>& inputs)
      : m(m_) {
    for (int i = 0; i < m; ++i) {
      if (byz.count(i)) continue;
      honest.push_back(i);
      nodes.emplace_back(m, i, f, k, inputs[i]);
    }
  }

  // byz_to[h] = payload the (single) Byzantine coalition delivers to honest
  // slot h this round (ignored where no Byzantine member exists).
  void step(int round, const std::set<int>& byz, const std::vector<uint64_t>& byz_to) {
    bool king_round = round % 3 == 2;
    int king = nodes.empty() ? 0 : nodes[0].king_of(round / 3);
    std::vector<uint64_t> outgoing(m, 0);
    for (size_t h = 0; h < honest.size(); ++h) outgoing[honest[h]] = nodes[h].outgoing(round);
    for (size_t h = 0; h < honest.size(); ++h) {
      std::vector<uint64_t> payloads(m, 0);
      uint64_t present = king_round ? (uint64_t{1} << king) : ((uint64_t{1} << m) - 1);
      for (int j = 0; j < m; ++j) payloads[j] = byz.count(j) ? byz_to[h] : outgoing[j];
      nodes[h].deliver(round, payloads, present);
    }
  }

  std::vector<uint64_t> decisions() const {
    std::vector<uint64_t> out;
    for (const auto& node : nodes) out.push_back(node.decision());
    return out;
  }
};

struct PkGameStats {
  long long agreement_violations = 0;
  long long validity_violations = 0;
  long long states_explored = 0;
};

// Full game tree at m=4 with one Byzantine member: every payload choice per
// honest receiver per round, deduplicating states that are behaviorally
// identical. Covers every Byzantine position and every honest input pattern.
inline PkGameStats pk_exhaustive_m4_f1() {
  PkGameStats stats;
  for (int byz_pos = 0; byz_pos < 4; ++byz_pos) {
    std::set<int> byz{byz_pos};
    for (int input_bits = 0; input_bits < 16; ++input_bits) {
      std::vector<uint64_t> inputs(4);
      for (int i = 0; i < 4; ++i) inputs[i] = (input_bits >> i) & 1;
      bool unanimous = true;
      uint64_t common = 2;
      for (int i = 0; i < 4; ++i) {
        if (i == byz_pos) continue;
        if (common == 2) common = inputs[i];
        if (inputs[i] != common) unanimous = false;
      }

      std::vector<HonestSet> level{HonestSet(4, byz, 1, 1, inputs)};
      int total_rounds = level[0].nodes[0].total_rounds();
      for (int r = 0; r < total_rounds; ++r) {
        bool byz_is_king = (r % 3 == 2) && level[0].nodes[0].king_of(r / 3) == byz_pos;
        bool byz_silent_round = (r % 3 == 2) && !byz_is_king;
        // Payload space per honest receiver: 1 bit (value/king) or 2 bits
        // (propose); 3 honest receivers.
        int per_receiver = (r % 3 == 1) ? 4 : 2;
        int choices = byz_silent_round ? 1 : per_receiver * per_receiver * per_receiver;

        std::vector<HonestSet> next;
        std::set<std::tuple<uint64_t, uint64_t, uint64_t>> seen;
        for (const auto& state : level) {
          for (int c = 0; c < choices; ++c) {
            std::vector<uint64_t> byz_to(3);
            int rem = c;
            for (int h = 0; h < 3; ++h) {
              byz_to[h] = rem % per_receiver;
              rem /= per_receiver;
            }
            HonestSet s = state;
            s.step(r, byz, byz_to);
            ++stats.states_explored;
            auto key = std::make_tuple(s.nodes[0].state_fingerprint(),
                                       s.nodes[1].state_fingerprint(),
                                       s.nodes[2].state_fingerprint());
            if (seen.insert(key).second) next.push_back(std::move(s));
          }
        }
        level = std::move(next);
      }

      for (const auto& s : level) {
        auto d = s.decisions();
        if (!(d[0] == d[1] && d[1] == d[2])) ++stats.agreement_violations;
        if (unanimous && d[0] != common) ++stats.validity_violations;
      }
    }
  }
  return stats;
}

}  // namespace byztest
