#include "byzclique/protocol.hpp"

#include <cmath>

#include "json.hpp"

namespace byz {

namespace {

struct NodeRecon {
  DisagreementOutcome d;
  AgreementOutcome a;
};

int local_verdict(const NodeRecon& r, int b, const HereditaryClass& cls, long long work_cap,
                  bool* flagged) {
  if (r.a.rejected) return 0;
  GapInstance inst;
  inst.view.agreement = r.a.a;
  inst.view.disagreement = r.d.d;
  inst.byzantine_count = b;
  inst.cls = &cls;
  try {
    return measure_gap(inst, nullptr, work_cap) == Decision::kAccept ? 1 : 0;
  } catch (const GapInfeasibleError&) {
    *flagged = true;
    return 0;
  } catch (const std::invalid_argument&) {
    // Adversarial garbage produced an inconsistent view: fail safe.
    *flagged = true;
    return 0;
  }
}

}  // namespace

bool RunReport::honest_unanimous(int value) const {
  std::set<NodeId> byz(byzantine.begin(), byzantine.end());
  for (NodeId v = 1; v <= n; ++v) {
    if (byz.count(v)) continue;
    if (decisions[v - 1] != value) return false;
  }
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["b"] = b;
  j["class"] = class_name;
  j["decisions"] = decisions;
  j["byzantine"] = byzantine;
  j["structures_valid"] = structures_valid;
  j["flagged"] = flagged;
  j["total_rounds"] = total_rounds;
  j["total_words"] = total_words;
  auto& ph = j["phases"] = nlohmann::json::array();
  for (const auto& p : phases) {
    ph.push_back({{"name", p.name}, {"rounds", p.rounds}, {"words", p.words}});
  }
  return j.dump();
}

RunReport run_recognition(RoundEngine& eng, const Graph& g, int b, const HereditaryClass& cls,
                          const RowProvider& byz_rows, const ProtocolOptions& opts) {
  int n = eng.n();
  if (g.node_count() != n) throw std::invalid_argument("run_recognition: graph size mismatch");

  RunReport report;
  report.n = n;
  report.b = b;
  report.class_name = cls.name;
  report.byzantine.assign(eng.byzantine().begin(), eng.byzantine().end());

  auto leaders = build_leader_committee(eng, opts.committees);
  // accepts[w-1] / totals counted over leader broadcasts seen by node w
  std::vector<int> accept_votes(n, 0);

  for (size_t li = 0; li < leaders.members.size(); ++li) {
    NodeId leader = leaders.members[li];
    std::string tag = std::to_string(li);

    eng.mark_phase("structure-" + tag);
    auto s = build_committee_structure(eng, "structure-" + tag, g, b, opts.committees, byz_rows);
    report.structures_valid =
        report.structures_valid && assignment_valid(s.assign, eng.byzantine());

    eng.mark_phase("recon-" + tag);
    std::vector<std::function<Proc<NodeRecon>(NodeApi&)>> recon_factories;
    for (NodeId w = 1; w <= n; ++w) {
      auto rows = rows_held_by(s, w);
      recon_factories.push_back(
          [&s, b, &cls, &opts, rows](NodeApi& api) -> Proc<NodeRecon> {
            auto other = co_await cross_bits_program(api, s.assign, rows);
            auto d = co_await disagreement_program(api, s.assign, b, rows, other);
            auto a = co_await agreement_program(api, s.assign, b, &cls, opts.backend, rows,
                                                std::move(other));
            co_return NodeRecon{std::move(d), std::move(a)};
          });
    }
    auto recons = eng.run_phase<NodeRecon>(recon_factories);

    std::vector<int> verdicts(n, 0);
    for (NodeId w = 1; w <= n; ++w) {
      if (recons[w - 1].d.truncated && !eng.byzantine().count(w)) report.flagged = true;
      verdicts[w - 1] = local_verdict(recons[w - 1], b, cls, opts.gap_work_cap,
                                      &report.flagged);
    }

    eng.mark_phase("verdict-" + tag);
    std::vector<std::function<Proc<int>(NodeApi&)>> verdict_factories;
    for (NodeId w = 1; w <= n; ++w) {
      int mine = verdicts[w - 1];
      verdict_factories.push_back([leader, mine, n](NodeApi& api) -> Proc<int> {
        NodeId me = api.id();
        if (me != leader) api.send(leader, static_cast<uint64_t>(mine));
        co_await api.next_round();
        int decision = 0;
        if (me == leader) {
          int ones = mine == 1, zeros = mine != 1;
          for (const auto& d : api.inbox()) (d.payload == 1 ? ones : zeros) += 1;
          decision = ones > zeros ? 1 : 0;  // ties reject
          for (NodeId x = 1; x <= n; ++x)
            if (x != me) api.send(x, static_cast<uint64_t>(decision));
        }
        co_await api.next_round();
        if (me != leader) {
          for (const auto& d : api.inbox())
            if (d.sender == leader) decision = d.payload == 1 ? 1 : 0;
        }
        co_return decision;
      });
    }
    auto leader_views = eng.run_phase<int>(verdict_factories);
    for (NodeId w = 1; w <= n; ++w) accept_votes[w - 1] += leader_views[w - 1];
  }

  int leader_count = static_cast<int>(leaders.members.size());
  report.decisions.resize(n);
  for (NodeId w = 1; w <= n; ++w) {
    // Most repeated leader decision; ties reject.
    report.decisions[w - 1] = 2 * accept_votes[w - 1] > leader_count ? 1 : 0;
  }

  report.total_rounds = eng.round();
  report.total_words = eng.words_sent();
  const auto& marks = eng.phase_marks();
  for (size_t i = 0; i < marks.size(); ++i) {
    long long end_round = i + 1 < marks.size() ? marks[i + 1].first_round : eng.round();
    long long end_words = i + 1 < marks.size() ? marks[i + 1].words_before : eng.words_sent();
    report.phases.push_back(
        {marks[i].name, end_round - marks[i].first_round, end_words - marks[i].words_before});
  }
  return report;
}

long long round_budget(const HereditaryClass& cls, int n, int b) {
  const double c1 = 64.0, c2 = 512.0;
  double lg = ceil_log2(n);
  double budget = c1 * (class_growth_bits(cls, n) / n + b) * lg * lg * lg + c2;
  return static_cast<long long>(std::ceil(budget));
}

}  // namespace byz
