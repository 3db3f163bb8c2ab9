#pragma once

#include <string>
#include <vector>

#include "byzclique/committees.hpp"
#include "byzclique/engine.hpp"
#include "byzclique/gapcheck.hpp"
#include "byzclique/recon.hpp"

namespace byz {

struct PhaseStat {
  std::string name;
  long long rounds = 0;
  long long words = 0;
};

struct RunReport {
  int n = 0;
  int b = 0;
  std::string class_name;
  std::vector<int> decisions;  // per node, 1 = accept, 0 = reject
  std::vector<NodeId> byzantine;
  bool structures_valid = true;  // ground-truth committee validity, all leaders
  bool flagged = false;          // truncated lists or infeasible gap search
  long long total_rounds = 0;
  long long total_words = 0;
  std::vector<PhaseStat> phases;

  bool honest_unanimous(int value) const;
  std::string to_json() const;
};

struct ProtocolOptions {
  AgreementBackend backend = AgreementBackend::kBroadcast;
  CommitteeParams committees{};
  long long gap_work_cap = kDefaultGapWorkCap;
};

/// The full recognition protocol on the given engine: elect the leader set,
/// then per leader build a committee structure, reconstruct disagreement and
/// agreement graphs, measure the gap locally, and route verdicts through the
/// leader; every node finally takes the majority over leader broadcasts
/// (ties rejecting).
RunReport run_recognition(RoundEngine& eng, const Graph& g, int b, const HereditaryClass& cls,
                          const RowProvider& byz_rows = nullptr,
                          const ProtocolOptions& opts = {});

/// Round cap for a recognition run: c1 * (growth/n + b) * ceil(log2 n)^3 + c2
/// with pinned constants c1 = 64, c2 = 512.
long long round_budget(const HereditaryClass& cls, int n, int b);

}  // namespace byz
