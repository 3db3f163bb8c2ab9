#include "byzclique/committees.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "byzclique/phase_king.hpp"
#include "json.hpp"

namespace byz {

uint64_t next_assignment_uid() {
  static std::atomic<uint64_t> counter{1};
  return counter.fetch_add(1);
}

int ceil_log2(int n) {
  int t = 0;
  while ((1LL << t) < n) ++t;
  return t;
}

int committee_size(int n, const CommitteeParams& p) {
  return std::min(n, std::max(3, p.c0 * ceil_log2(n)));
}

namespace {

int membership_cap(int n, const CommitteeParams& p) {
  int lg = ceil_log2(n);
  return std::max(committee_size(n, p), p.inverse_cap_c * lg * lg);
}

// Draw `size` distinct nodes from the coin stream; nodes at the membership
// cap are skipped until too few alternatives remain (then the cap yields,
// keeping the draw total and deterministic).
std::vector<NodeId> draw_committee(const RoundEngine& eng, std::string_view label, uint64_t& ctr,
                                   int size, std::vector<int>* load, int cap) {
  int n = eng.n();
  std::vector<NodeId> out;
  std::vector<char> taken(n + 1, 0);
  long long attempts = 0;
  while (static_cast<int>(out.size()) < size) {
    NodeId cand = 1 + static_cast<NodeId>(eng.shared_coin(label, ctr++) % n);
    ++attempts;
    bool capped = load && (*load)[cand] >= cap && attempts <= 64LL * n;
    if (taken[cand] || capped) continue;
    taken[cand] = 1;
    out.push_back(cand);
    if (load) ++(*load)[cand];
  }
  return out;
}

}  // namespace

// Most repeated value; ties resolve to the smallest value (fail-safe).
// Report lists are committee-sized, so the quadratic scan is cheap.
uint64_t majority_word(const std::vector<uint64_t>& reports) {
  uint64_t best = 0;
  int best_count = 0;
  for (size_t i = 0; i < reports.size(); ++i) {
    uint64_t v = reports[i];
    int c = 0;
    for (size_t j = 0; j < reports.size(); ++j) c += reports[j] == v;
    if (c > best_count || (c == best_count && v < best)) {
      best = v;
      best_count = c;
    }
  }
  return best;
}

namespace {

uint64_t majority_bits(const std::vector<uint64_t>& reports, int bits) {
  uint64_t out = 0;
  for (int i = 0; i < bits; ++i) {
    int ones = 0;
    for (uint64_t r : reports) ones += (r >> i) & 1u;
    if (2 * ones > static_cast<int>(reports.size())) out |= uint64_t{1} << i;
  }
  return out;
}

}  // namespace

std::shared_ptr<const PlannedExchange> cached_exchange(const CommitteeAssignment& assign,
                                                       const std::string& tag,
                                                       const PlanBuilder& build) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::shared_ptr<const PlannedExchange>> cache;

  std::string key = std::to_string(assign.uid) + ":" + tag;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto pe = std::make_shared<PlannedExchange>();
  build(*pe);
  int n = assign.n;
  std::vector<int> load(static_cast<size_t>(n) * n, 0);
  pe->send_slots.resize(n);
  pe->recv_slots.resize(n);
  for (size_t i = 0; i < pe->plan.size(); ++i) {
    auto [from, to] = pe->plan[i];
    pe->window = std::max(pe->window, ++load[(from - 1) * n + (to - 1)]);
    pe->send_slots[from - 1].push_back(static_cast<uint32_t>(i));
    pe->recv_slots[to - 1].push_back(static_cast<uint32_t>(i));
  }
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() > 512) cache.clear();  // bound memory across long sweeps
  return cache.emplace(std::move(key), std::move(pe)).first->second;
}

LeaderCommittee build_leader_committee(const RoundEngine& eng, const CommitteeParams& p) {
  uint64_t ctr = 0;
  return {draw_committee(eng, "leader-committee", ctr, committee_size(eng.n(), p), nullptr, 0)};
}

CommitteeAssignment sample_committees(const RoundEngine& eng, std::string_view label,
                                      const CommitteeParams& p) {
  int n = eng.n();
  CommitteeAssignment a;
  a.n = n;
  a.comm.resize(n);
  a.inverse.resize(n);
  std::vector<int> load(n + 1, 0);
  int size = committee_size(n, p);
  int cap = membership_cap(n, p);
  uint64_t ctr = 0;
  for (NodeId v = 1; v <= n; ++v) {
    a.comm[v - 1] = draw_committee(eng, label, ctr, size, &load, cap);
    for (NodeId w : a.comm[v - 1]) a.inverse[w - 1].push_back(v);
  }
  return a;
}

Proc<std::vector<uint64_t>> exchange_words(NodeApi& api, const Plan& plan,
                                           std::vector<uint64_t> words, int window) {
  int n = api.n();
  NodeId me = api.id();
  if (window < 0) {
    std::vector<int> load(static_cast<size_t>(n) * n, 0);
    window = 0;
    for (auto [from, to] : plan) window = std::max(window, ++load[(from - 1) * n + (to - 1)]);
  }
  std::vector<std::vector<size_t>> slots_by_sender(n + 1);
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].first == me) api.send(plan[i].second, words[i]);
    if (plan[i].second == me) slots_by_sender[plan[i].first].push_back(i);
  }
  std::vector<uint64_t> out(plan.size(), 0);
  std::vector<size_t> cursor(n + 1, 0);
  for (int r = 0; r < window; ++r) {
    co_await api.next_round();
    for (const auto& d : api.inbox()) {
      auto& mine = slots_by_sender[d.sender];
      if (cursor[d.sender] < mine.size()) out[mine[cursor[d.sender]++]] = d.payload;
    }
  }
  co_return out;
}

Proc<std::vector<uint64_t>> exchange_planned(NodeApi& api, const PlannedExchange& pe,
                                             std::vector<uint64_t> words) {
  int n = api.n();
  NodeId me = api.id();
  const auto& sends = pe.send_slots[me - 1];
  for (size_t j = 0; j < sends.size(); ++j) api.send(pe.plan[sends[j]].second, words[j]);

  const auto& recvs = pe.recv_slots[me - 1];
  std::vector<std::vector<uint32_t>> by_sender(n + 1);
  for (size_t j = 0; j < recvs.size(); ++j)
    by_sender[pe.plan[recvs[j]].first].push_back(static_cast<uint32_t>(j));
  std::vector<uint64_t> out(recvs.size(), 0);
  std::vector<size_t> cursor(n + 1, 0);
  for (int r = 0; r < pe.window; ++r) {
    co_await api.next_round();
    for (const auto& d : api.inbox()) {
      auto& mine = by_sender[d.sender];
      if (cursor[d.sender] < mine.size()) out[mine[cursor[d.sender]++]] = d.payload;
    }
  }
  co_return out;
}

Proc<std::vector<std::pair<NodeId, uint64_t>>> structure_program(
    NodeApi& api, const CommitteeAssignment& assign, int known_byz,
    std::function<uint64_t(NodeId member)> my_row) {
  int n = assign.n;
  NodeId me = api.id();
  int m = static_cast<int>(assign.comm[0].size());
  int wb = api.word_bits();
  int words_per_row = (n + wb - 1) / wb;
  uint64_t word_mask = wb >= 64 ? ~uint64_t{0} : (uint64_t{1} << wb) - 1;

  // Phase A: every node hands its claimed row to each member of its
  // committee, chunked into words. meta = (source v, chunk).
  auto pa = cached_exchange(assign, "phaseA:" + std::to_string(words_per_row),
                            [&](PlannedExchange& pe) {
                              for (NodeId v = 1; v <= n; ++v) {
                                for (NodeId w : assign.comm[v - 1]) {
                                  if (w == v) continue;
                                  for (int t = 0; t < words_per_row; ++t) {
                                    pe.plan.emplace_back(v, w);
                                    pe.meta.push_back({v, t, 0});
                                  }
                                }
                              }
                            });
  const auto& pa_sends = pa->send_slots[me - 1];
  std::vector<uint64_t> out_words(pa_sends.size(), 0);
  for (size_t j = 0; j < pa_sends.size(); ++j) {
    uint32_t i = pa_sends[j];
    out_words[j] = (my_row(pa->plan[i].second) >> (pa->meta[i][1] * wb)) & word_mask;
  }
  auto got = co_await exchange_planned(api, *pa, std::move(out_words));

  std::vector<uint64_t> row0(n + 1, 0);
  const auto& pa_recvs = pa->recv_slots[me - 1];
  for (size_t j = 0; j < pa_recvs.size(); ++j) {
    uint32_t i = pa_recvs[j];
    row0[pa->meta[i][0]] |= got[j] << (pa->meta[i][1] * wb);
  }
  // A member of its own committee starts from its own claim to itself.
  for (NodeId v : assign.inverse[me - 1]) {
    if (v == me) row0[me] = my_row(me);
  }

  // My position within each committee I sit on.
  std::vector<int> my_index(n + 1, -1);
  for (NodeId v : assign.inverse[me - 1]) {
    const auto& c = assign.comm[v - 1];
    my_index[v] = static_cast<int>(std::find(c.begin(), c.end(), me) - c.begin());
  }

  // Phase B: agree on every row, k bits per batch across all committees in
  // lockstep. 2k proposal bits must fit one word.
  int k = std::max(1, std::min(32, wb / 2));
  int f_pk = std::min(known_byz, (m - 1) / 3);
  uint64_t kmask = (uint64_t{1} << k) - 1;
  std::vector<uint64_t> agreed(n + 1, 0);

  // Round plans: all members speak, or only the king. meta = (v, speaker idx).
  auto pk_plan = [&](bool king_round, int king_index) {
    std::string tag = king_round ? "pk:king:" + std::to_string(king_index) : "pk:full";
    return cached_exchange(assign, tag, [&](PlannedExchange& pe) {
      for (NodeId v = 1; v <= n; ++v) {
        const auto& c = assign.comm[v - 1];
        for (int s = 0; s < m; ++s) {
          if (king_round && s != king_index) continue;
          for (int w = 0; w < m; ++w) {
            if (w == s) continue;
            pe.plan.emplace_back(c[s], c[w]);
            pe.meta.push_back({v, s, 0});
          }
        }
      }
    });
  };

  // Plans are identical across phases, so fetch them once per batch.
  int phases = f_pk + 1;
  auto full_pe = pk_plan(false, 0);
  std::vector<std::shared_ptr<const PlannedExchange>> king_pe;
  for (int p = 0; p < phases; ++p) king_pe.push_back(pk_plan(true, p % m));

  for (int lo = 0; lo < n; lo += k) {
    std::map<NodeId, PhaseKingNode> pk;
    for (NodeId v : assign.inverse[me - 1]) {
      pk.emplace(v, PhaseKingNode(m, my_index[v], f_pk, k, (row0[v] >> lo) & kmask));
    }
    int rounds = 3 * phases;
    for (int r = 0; r < rounds; ++r) {
      bool king_round = (r % 3 == 2);
      int king_index = (r / 3) % m;
      const PlannedExchange& pe = king_round ? *king_pe[r / 3] : *full_pe;
      const auto& sends = pe.send_slots[me - 1];
      std::vector<uint64_t> round_words(sends.size(), 0);
      for (size_t j = 0; j < sends.size(); ++j) {
        round_words[j] = pk.at(pe.meta[sends[j]][0]).outgoing(r) & word_mask;
      }
      auto delivered = co_await exchange_planned(api, pe, std::move(round_words));
      std::map<NodeId, std::vector<uint64_t>> payloads;
      for (NodeId v : assign.inverse[me - 1]) {
        auto& vec = payloads[v];
        vec.assign(m, 0);
        vec[my_index[v]] = pk.at(v).outgoing(r);
      }
      const auto& recvs = pe.recv_slots[me - 1];
      for (size_t j = 0; j < recvs.size(); ++j) {
        uint32_t i = recvs[j];
        auto it = payloads.find(pe.meta[i][0]);
        if (it != payloads.end()) it->second[pe.meta[i][1]] = delivered[j];
      }
      for (NodeId v : assign.inverse[me - 1]) {
        uint64_t present = king_round ? (uint64_t{1} << king_index) : ((uint64_t{1} << m) - 1);
        pk.at(v).deliver(r, payloads.at(v), present);
      }
    }
    for (NodeId v : assign.inverse[me - 1]) agreed[v] |= pk.at(v).decision() << lo;
  }

  std::vector<std::pair<NodeId, uint64_t>> result;
  for (NodeId v : assign.inverse[me - 1]) result.emplace_back(v, agreed[v]);
  co_return result;
}

CommitteeStructure build_committee_structure(RoundEngine& eng, std::string_view label,
                                             const Graph& g, int known_byz,
                                             const CommitteeParams& p,
                                             const RowProvider& byz_rows) {
  auto assign = sample_committees(eng, label, p);
  int n = eng.n();
  if (g.node_count() != n) throw std::invalid_argument("structure: graph size mismatch");

  using Result = std::vector<std::pair<NodeId, uint64_t>>;
  std::vector<std::function<Proc<Result>(NodeApi&)>> factories;
  for (NodeId v = 1; v <= n; ++v) {
    bool is_byz = eng.byzantine().count(v) > 0;
    uint64_t true_row = g.row(v);
    std::function<uint64_t(NodeId)> my_row;
    if (is_byz && byz_rows) {
      my_row = [&byz_rows, v](NodeId member) { return byz_rows(v, member); };
    } else {
      my_row = [true_row](NodeId) { return true_row; };
    }
    factories.push_back([&assign, known_byz, my_row](NodeApi& api) {
      return structure_program(api, assign, known_byz, my_row);
    });
  }
  auto results = eng.run_phase<Result>(factories);

  CommitteeStructure s;
  s.assign = std::move(assign);
  s.member_rows.resize(n);
  for (NodeId v = 1; v <= n; ++v)
    s.member_rows[v - 1].assign(s.assign.comm[v - 1].size(), 0);
  for (NodeId w = 1; w <= n; ++w) {
    for (auto [v, row] : results[w - 1]) {
      const auto& c = s.assign.comm[v - 1];
      for (size_t j = 0; j < c.size(); ++j)
        if (c[j] == w) s.member_rows[v - 1][j] = row;
    }
  }
  return s;
}

uint64_t CommitteeStructure::common_row(NodeId v) const {
  return majority_bits(member_rows[v - 1], assign.n);
}

bool CommitteeStructure::honest_members_agree(NodeId v, const std::set<NodeId>& byz) const {
  const auto& c = assign.comm[v - 1];
  bool seen = false;
  uint64_t value = 0;
  for (size_t j = 0; j < c.size(); ++j) {
    if (byz.count(c[j])) continue;
    if (seen && member_rows[v - 1][j] != value) return false;
    value = member_rows[v - 1][j];
    seen = true;
  }
  return true;
}

std::string CommitteeStructure::debug_json() const {
  nlohmann::json j;
  j["n"] = assign.n;
  j["comm"] = assign.comm;
  j["member_rows"] = member_rows;
  return j.dump();
}

bool assignment_valid(const CommitteeAssignment& a, const std::set<NodeId>& byz) {
  for (const auto& c : a.comm) {
    int bad = 0;
    for (NodeId w : c) bad += byz.count(w) > 0;
    if (3 * bad >= static_cast<int>(c.size())) return false;
  }
  return true;
}

ConditionReport check_conditions(const CommitteeStructure& s, const Graph& g,
                                 const std::set<NodeId>& byz, const CommitteeParams& p) {
  ConditionReport r;
  int n = s.assign.n;
  r.honest_strong_majority = assignment_valid(s.assign, byz);
  r.members_agree = true;
  r.honest_rows_exact = true;
  for (NodeId v = 1; v <= n; ++v) {
    if (!s.honest_members_agree(v, byz)) r.members_agree = false;
    if (!byz.count(v)) {
      const auto& c = s.assign.comm[v - 1];
      for (size_t j = 0; j < c.size(); ++j) {
        if (byz.count(c[j])) continue;
        if (s.member_rows[v - 1][j] != g.row(v)) r.honest_rows_exact = false;
      }
    }
  }
  int size = committee_size(n, p);
  r.size_bound = true;
  for (const auto& c : s.assign.comm)
    if (static_cast<int>(c.size()) != size) r.size_bound = false;
  int cap = membership_cap(n, p);
  r.inverse_bound = true;
  for (const auto& inv : s.assign.inverse)
    if (static_cast<int>(inv.size()) > cap) r.inverse_bound = false;
  return r;
}

Proc<std::vector<std::vector<uint64_t>>> relay_program(
    NodeApi& api, const CommitteeAssignment& assign,
    std::function<uint64_t(NodeId u, NodeId v)> held) {
  int n = assign.n;
  NodeId me = api.id();
  // meta = (u, v): Comm(u) member s forwards the word addressed to Comm(v).
  auto pe = cached_exchange(assign, "relay", [&](PlannedExchange& p) {
    for (NodeId u = 1; u <= n; ++u) {
      for (NodeId v = 1; v <= n; ++v) {
        for (NodeId s : assign.comm[u - 1]) {
          for (NodeId t : assign.comm[v - 1]) {
            if (s == t) continue;  // own report is counted locally
            p.plan.emplace_back(s, t);
            p.meta.push_back({u, v, 0});
          }
        }
      }
    }
  });
  const auto& sends = pe->send_slots[me - 1];
  std::vector<uint64_t> out_words(sends.size(), 0);
  for (size_t j = 0; j < sends.size(); ++j) {
    out_words[j] = held(pe->meta[sends[j]][0], pe->meta[sends[j]][1]);
  }
  auto got = co_await exchange_planned(api, *pe, std::move(out_words));

  std::vector<std::vector<uint64_t>> result(n, std::vector<uint64_t>(n, 0));
  std::vector<char> on_committee(n + 1, 0);
  for (NodeId v : assign.inverse[me - 1]) on_committee[v] = 1;

  // reports[u-1][v-1] built in plan order; my own held value stands in for
  // the self report when I sit on both committees.
  std::vector<std::vector<std::vector<uint64_t>>> reports(
      n, std::vector<std::vector<uint64_t>>(n));
  const auto& recvs = pe->recv_slots[me - 1];
  for (size_t j = 0; j < recvs.size(); ++j) {
    uint32_t i = recvs[j];
    reports[pe->meta[i][0] - 1][pe->meta[i][1] - 1].push_back(got[j]);
  }
  for (NodeId u = 1; u <= n; ++u) {
    for (NodeId v = 1; v <= n; ++v) {
      if (!on_committee[v]) continue;
      auto& rep = reports[u - 1][v - 1];
      if (on_committee[u]) rep.push_back(held(u, v));
      if (!rep.empty()) result[u - 1][v - 1] = majority_word(rep);
    }
  }
  co_return result;
}

std::vector<std::vector<std::vector<uint64_t>>> committee_relay(
    RoundEngine& eng, const CommitteeAssignment& assign,
    const std::vector<std::vector<uint64_t>>& messages, const RelayLiar& liar) {
  int n = eng.n();
  using Result = std::vector<std::vector<uint64_t>>;
  std::vector<std::function<Proc<Result>(NodeApi&)>> factories;
  for (NodeId w = 1; w <= n; ++w) {
    bool is_byz = eng.byzantine().count(w) > 0;
    std::function<uint64_t(NodeId, NodeId)> held;
    if (is_byz && liar) {
      held = [&liar, w](NodeId u, NodeId v) { return liar(w, u, v); };
    } else {
      held = [&messages](NodeId u, NodeId v) { return messages[u - 1][v - 1]; };
    }
    factories.push_back([&assign, held](NodeApi& api) {
      return relay_program(api, assign, held);
    });
  }
  return eng.run_phase<Result>(factories);
}

Proc<std::vector<std::vector<uint64_t>>> committee_broadcast_program(
    NodeApi& api, const CommitteeAssignment& assign, int words_per_value,
    std::function<std::vector<uint64_t>(NodeId u)> held) {
  int n = assign.n;
  NodeId me = api.id();
  // meta = (u, word idx).
  auto pe = cached_exchange(assign, "bcast:" + std::to_string(words_per_value),
                            [&](PlannedExchange& p) {
                              for (NodeId u = 1; u <= n; ++u) {
                                for (NodeId s : assign.comm[u - 1]) {
                                  for (NodeId x = 1; x <= n; ++x) {
                                    if (x == s) continue;
                                    for (int t = 0; t < words_per_value; ++t) {
                                      p.plan.emplace_back(s, x);
                                      p.meta.push_back({u, t, 0});
                                    }
                                  }
                                }
                              }
                            });
  std::vector<char> member_of(n + 1, 0);
  for (NodeId u : assign.inverse[me - 1]) member_of[u] = 1;
  std::vector<std::vector<uint64_t>> own(n + 1);
  for (NodeId u = 1; u <= n; ++u)
    if (member_of[u]) own[u] = held(u);

  const auto& sends = pe->send_slots[me - 1];
  std::vector<uint64_t> out_words(sends.size(), 0);
  for (size_t j = 0; j < sends.size(); ++j) {
    out_words[j] = own[pe->meta[sends[j]][0]][pe->meta[sends[j]][1]];
  }
  auto got = co_await exchange_planned(api, *pe, std::move(out_words));

  // Per source u and word position, majority over the committee's reports
  // (my own held words stand in where I am a member).
  std::vector<std::vector<std::vector<uint64_t>>> reports(
      n, std::vector<std::vector<uint64_t>>(words_per_value));
  const auto& recvs = pe->recv_slots[me - 1];
  for (size_t j = 0; j < recvs.size(); ++j) {
    uint32_t i = recvs[j];
    reports[pe->meta[i][0] - 1][pe->meta[i][1]].push_back(got[j]);
  }
  std::vector<std::vector<uint64_t>> result(n, std::vector<uint64_t>(words_per_value, 0));
  for (NodeId u = 1; u <= n; ++u) {
    for (int t = 0; t < words_per_value; ++t) {
      auto& rep = reports[u - 1][t];
      if (member_of[u]) rep.push_back(own[u][t]);
      if (!rep.empty()) result[u - 1][t] = majority_word(rep);
    }
  }
  co_return result;
}

}  // namespace byz
