#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "byzclique/classes.hpp"
#include "byzclique/view.hpp"

namespace byz {

enum class Decision { kAccept, kReject };

/// Input to the local gap-measuring procedure.
struct GapInstance {
  AgreementView view;
  int byzantine_count = 0;  // |B|, known to every honest node
  const HereditaryClass* cls = nullptr;

  int node_count() const { return view.agreement.node_count(); }
  bool valid() const {
    return cls != nullptr && view.consistent() && byzantine_count >= 0 &&
           byzantine_count <= node_count();
  }
};

/// Witness emitted on ACCEPT: the suspicious set and the incident-edge
/// rewrite that landed in the class.
struct GapWitness {
  uint64_t suspicious_mask = 0;
  std::vector<std::pair<int, int>> rewrite_edges;
};

/// Raised when the exhaustive search would exceed its work cap; callers
/// must treat this as "infeasible", never as an answer.
struct GapInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Membership evaluations allowed per measure_gap call before it gives up.
inline constexpr long long kDefaultGapWorkCap = 1LL << 27;

/// All size-b vertex masks covering every edge of d, in ascending
/// lexicographic order of the member ID tuple.
std::vector<uint64_t> enumerate_covers(const Graph& d, int b);

/// G^F = F united with (A minus all S-incident pairs). Every pair in F
/// must have at least one endpoint in S.
Graph rewrite(const Graph& agreement, uint64_t s_mask, const std::vector<std::pair<int, int>>& f);

/// The local decision procedure: ACCEPT iff the agreement graph is in the
/// class, or some size-|B| suspicious set S covering D admits an
/// incident-edge rewrite F with G^F in the class. Pure and deterministic.
Decision measure_gap(const GapInstance& inst, GapWitness* witness = nullptr,
                     long long work_cap = kDefaultGapWorkCap);

}  // namespace byz
