#pragma once

#include "byzclique/graph.hpp"

namespace byz {

/// Agreement and disagreement edges induced by a committee structure:
/// A holds pairs whose two committees both assert the edge, D holds pairs
/// whose committees contradict each other. A and D are disjoint.
struct AgreementView {
  Graph agreement;     // A
  Graph disagreement;  // D

  bool consistent() const {
    if (agreement.node_count() != disagreement.node_count()) return false;
    for (int u = 1; u <= agreement.node_count(); ++u) {
      if (agreement.row(u) & disagreement.row(u)) return false;
    }
    return true;
  }
};

}  // namespace byz
