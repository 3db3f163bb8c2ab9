#include "byzclique/recon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace byz {

namespace {

int pair_index(int n, int u, int v) {
  if (u > v) std::swap(u, v);
  // pairs (1,2),(1,3),...,(1,n),(2,3),... in lexicographic order
  int idx = 0;
  for (int a = 1; a < u; ++a) idx += n - a;
  return idx + (v - u - 1);
}

int bits_for(uint64_t values) {
  int b = 1;
  while ((uint64_t{1} << b) < values) ++b;
  return b;
}

}  // namespace

AgreementView ground_truth_view(const CommitteeStructure& s) {
  int n = s.node_count();
  AgreementView view{Graph(n), Graph(n)};
  std::vector<uint64_t> rows(n + 1);
  for (NodeId v = 1; v <= n; ++v) rows[v] = s.common_row(v);
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      bool cu = (rows[u] >> (v - 1)) & 1u;
      bool cv = (rows[v] >> (u - 1)) & 1u;
      if (cu && cv) view.agreement.add_edge(u, v);
      if (cu != cv) view.disagreement.add_edge(u, v);
    }
  }
  return view;
}

Proc<std::vector<uint64_t>> cross_bits_program(NodeApi& api, const CommitteeAssignment& assign,
                                               std::function<uint64_t(NodeId)> my_row_of) {
  int n = assign.n;
  int wb = api.word_bits();
  int words_per_row = (n + wb - 1) / wb;
  uint64_t word_mask = wb >= 64 ? ~uint64_t{0} : (uint64_t{1} << wb) - 1;

  // The members of Comm(u) hold the whole agreed row of u, so all n bits
  // c_u(.) travel batched into row words instead of one word per pair.
  auto voted = co_await committee_broadcast_program(
      api, assign, words_per_row, [&](NodeId u) {
        std::vector<uint64_t> words(words_per_row);
        for (int t = 0; t < words_per_row; ++t) words[t] = (my_row_of(u) >> (t * wb)) & word_mask;
        return words;
      });
  std::vector<uint64_t> other(n, 0);
  for (NodeId u = 1; u <= n; ++u) {
    uint64_t row = 0;
    for (int t = 0; t < words_per_row; ++t) row |= voted[u - 1][t] << (t * wb);
    for (NodeId v = 1; v <= n; ++v) {
      if ((row >> (v - 1)) & 1u) other[v - 1] |= uint64_t{1} << (u - 1);
    }
  }
  co_return other;
}

Proc<DisagreementOutcome> disagreement_program(NodeApi& api, const CommitteeAssignment& assign,
                                               int b,
                                               std::function<uint64_t(NodeId)> my_row_of,
                                               std::vector<uint64_t> other_bits) {
  int n = assign.n;
  NodeId me = api.id();
  uint64_t nmask = n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;

  // Disagreement incidences of each node I serve: c_v(.) xor c_.(v).
  std::vector<uint64_t> dmask(n + 1, 0);
  for (NodeId v : assign.inverse[me - 1]) {
    dmask[v] = (my_row_of(v) ^ other_bits[v - 1]) & nmask & ~(uint64_t{1} << (v - 1));
  }

  // Step 1: committees publish disagreement degrees, majority-voted.
  auto voted_deg = co_await committee_broadcast_program(
      api, assign, 1, [&dmask](NodeId u) {
        return std::vector<uint64_t>{static_cast<uint64_t>(std::popcount(dmask[u]))};
      });
  std::vector<int> degrees(n, 0);
  for (int u = 0; u < n; ++u)
    degrees[u] = static_cast<int>(std::min<uint64_t>(voted_deg[u][0], n));

  DisagreementOutcome out;
  out.d = Graph(n);
  out.degrees = degrees;
  if (b <= 0) co_return out;

  // Step 2: high-degree nodes (necessarily Byzantine) form V+; low-degree
  // committees publish all incident edges, high-degree committees only the
  // edges into V+ — at most |B| either way, truncated and flagged beyond.
  std::vector<char> vplus(n + 1, 0);
  for (int u = 1; u <= n; ++u) vplus[u] = degrees[u - 1] > b;

  bool local_truncation = false;
  auto held_list = [&](NodeId u) {
    std::vector<uint64_t> words(static_cast<size_t>(b) + 1, 0);
    std::vector<int> eps;
    for (int w = 1; w <= n; ++w) {
      if (!((dmask[u] >> (w - 1)) & 1u)) continue;
      if (vplus[u] && !vplus[w]) continue;
      eps.push_back(w);
    }
    if (static_cast<int>(eps.size()) > b) {
      local_truncation = true;
      eps.resize(b);
    }
    words[0] = eps.size();
    for (size_t i = 0; i < eps.size(); ++i) words[i + 1] = static_cast<uint64_t>(eps[i] - 1);
    return words;
  };
  auto voted_lists = co_await committee_broadcast_program(api, assign, b + 1, held_list);
  out.truncated = local_truncation;

  for (int u = 1; u <= n; ++u) {
    int count = static_cast<int>(std::min<uint64_t>(voted_lists[u - 1][0], b));
    for (int i = 1; i <= count; ++i) {
      int w = static_cast<int>(voted_lists[u - 1][i]) + 1;
      if (w >= 1 && w <= n && w != u) out.d.add_edge(u, w);
    }
  }
  co_return out;
}

Proc<AgreementOutcome> agreement_program(NodeApi& api, const CommitteeAssignment& assign, int b,
                                         const HereditaryClass* cls, AgreementBackend backend,
                                         std::function<uint64_t(NodeId)> my_row_of,
                                         std::vector<uint64_t> other_bits) {
  int n = assign.n;
  NodeId me = api.id();
  int wb = api.word_bits();
  uint64_t word_mask = wb >= 64 ? ~uint64_t{0} : (uint64_t{1} << wb) - 1;
  int words_per_row = (n + wb - 1) / wb;

  std::vector<uint64_t> arow(n + 1, 0);
  for (NodeId v : assign.inverse[me - 1]) {
    arow[v] = my_row_of(v) & other_bits[v - 1] & ~(uint64_t{1} << (v - 1));
  }

  AgreementOutcome out;
  if (backend == AgreementBackend::kBroadcast) {
    auto voted = co_await committee_broadcast_program(
        api, assign, words_per_row, [&](NodeId u) {
          std::vector<uint64_t> words(words_per_row);
          for (int t = 0; t < words_per_row; ++t) words[t] = (arow[u] >> (t * wb)) & word_mask;
          return words;
        });
    std::vector<uint64_t> rows(n + 1, 0);
    for (int u = 1; u <= n; ++u)
      for (int t = 0; t < words_per_row; ++t) rows[u] |= voted[u - 1][t] << (t * wb);
    out.a = Graph(n);
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v)
        if (((rows[u] >> (v - 1)) & 1u) && ((rows[v] >> (u - 1)) & 1u)) out.a.add_edge(u, v);
    co_return out;
  }

  // Class-index backend: every committee relays its A-row to Comm(1), which
  // locates G_A in the enumerated blow-up family and transmits its index (or
  // a reject sentinel) to everyone.
  auto family = enumerate_blowup(*cls, n, b);
  uint64_t sentinel = family.size();
  int index_bits = bits_for(sentinel + 1);
  int index_words = (index_bits + wb - 1) / wb;

  const auto& c1 = assign.comm[0];
  // meta = (u, chunk): Comm(u) members relay A-row chunks to Comm(1).
  auto pe = cached_exchange(assign, "cidx:" + std::to_string(words_per_row),
                            [&](PlannedExchange& p) {
                              for (NodeId u = 1; u <= n; ++u) {
                                for (NodeId s : assign.comm[u - 1]) {
                                  for (NodeId t : c1) {
                                    if (s == t) continue;
                                    for (int ch = 0; ch < words_per_row; ++ch) {
                                      p.plan.emplace_back(s, t);
                                      p.meta.push_back({u, ch, 0});
                                    }
                                  }
                                }
                              }
                            });
  const auto& sends = pe->send_slots[me - 1];
  std::vector<uint64_t> out_words(sends.size(), 0);
  for (size_t j = 0; j < sends.size(); ++j) {
    uint32_t i = sends[j];
    out_words[j] = (arow[pe->meta[i][0]] >> (pe->meta[i][1] * wb)) & word_mask;
  }
  auto got = co_await exchange_planned(api, *pe, std::move(out_words));

  bool on_c1 = std::find(c1.begin(), c1.end(), me) != c1.end();
  uint64_t my_index = sentinel;
  if (on_c1) {
    std::vector<std::vector<std::vector<uint64_t>>> reports(
        n, std::vector<std::vector<uint64_t>>(words_per_row));
    const auto& recvs = pe->recv_slots[me - 1];
    for (size_t j = 0; j < recvs.size(); ++j) {
      uint32_t i = recvs[j];
      reports[pe->meta[i][0] - 1][pe->meta[i][1]].push_back(got[j]);
    }
    std::vector<uint64_t> rows(n + 1, 0);
    for (NodeId u = 1; u <= n; ++u) {
      bool serve_u = false;
      for (NodeId v : assign.inverse[me - 1]) serve_u |= v == u;
      for (int ch = 0; ch < words_per_row; ++ch) {
        auto& rep = reports[u - 1][ch];
        if (serve_u) rep.push_back((arow[u] >> (ch * wb)) & word_mask);
        rows[u] |= majority_word(rep) << (ch * wb);
      }
    }
    Graph ga(n);
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v)
        if (((rows[u] >> (v - 1)) & 1u) && ((rows[v] >> (u - 1)) & 1u)) ga.add_edge(u, v);
    uint64_t mask = graph_mask(ga);
    auto it = std::lower_bound(family.begin(), family.end(), mask);
    my_index = (it != family.end() && *it == mask)
                   ? static_cast<uint64_t>(it - family.begin())
                   : sentinel;
  }

  // Dissemination: Comm(1) members send the index words to every node.
  // meta = (word idx).
  auto pe2 = cached_exchange(assign, "cidx-out:" + std::to_string(index_words),
                             [&](PlannedExchange& p) {
                               for (NodeId t : c1) {
                                 for (NodeId x = 1; x <= n; ++x) {
                                   if (x == t) continue;
                                   for (int w = 0; w < index_words; ++w) {
                                     p.plan.emplace_back(t, x);
                                     p.meta.push_back({w, 0, 0});
                                   }
                                 }
                               }
                             });
  const auto& sends2 = pe2->send_slots[me - 1];
  std::vector<uint64_t> out2(sends2.size(), 0);
  for (size_t j = 0; j < sends2.size(); ++j) {
    out2[j] = (my_index >> (pe2->meta[sends2[j]][0] * wb)) & word_mask;
  }
  auto got2 = co_await exchange_planned(api, *pe2, std::move(out2));

  std::vector<std::vector<uint64_t>> reports2(index_words);
  const auto& recvs2 = pe2->recv_slots[me - 1];
  for (size_t j = 0; j < recvs2.size(); ++j) {
    reports2[pe2->meta[recvs2[j]][0]].push_back(got2[j]);
  }
  uint64_t index = 0;
  for (int w = 0; w < index_words; ++w) {
    auto& rep = reports2[w];
    if (on_c1) rep.push_back((my_index >> (w * wb)) & word_mask);
    index |= majority_word(rep) << (w * wb);
  }

  if (index >= sentinel) {
    out.rejected = true;
    out.a = Graph(n);
  } else {
    out.a = graph_from_mask(family[index], n);
  }
  co_return out;
}

std::function<uint64_t(NodeId)> rows_held_by(const CommitteeStructure& s, NodeId w) {
  std::vector<uint64_t> held(s.node_count() + 1, 0);
  for (NodeId v = 1; v <= s.node_count(); ++v) {
    const auto& c = s.assign.comm[v - 1];
    for (size_t j = 0; j < c.size(); ++j)
      if (c[j] == w) held[v] = s.member_rows[v - 1][j];
  }
  return [held = std::move(held)](NodeId v) { return held[v]; };
}

std::vector<DisagreementOutcome> reconstruct_disagreement(RoundEngine& eng,
                                                          const CommitteeStructure& s, int b) {
  int n = eng.n();
  eng.mark_phase("disagreement-recon");
  std::vector<std::function<Proc<DisagreementOutcome>(NodeApi&)>> factories;
  for (NodeId w = 1; w <= n; ++w) {
    auto rows = rows_held_by(s, w);
    factories.push_back([&s, b, rows](NodeApi& api) -> Proc<DisagreementOutcome> {
      auto other = co_await cross_bits_program(api, s.assign, rows);
      co_return co_await disagreement_program(api, s.assign, b, rows, std::move(other));
    });
  }
  return eng.run_phase<DisagreementOutcome>(factories);
}

std::vector<AgreementOutcome> reconstruct_agreement(RoundEngine& eng, const CommitteeStructure& s,
                                                    int b, const HereditaryClass& cls,
                                                    AgreementBackend backend) {
  if (backend == AgreementBackend::kClassIndex && eng.n() > 8)
    throw std::invalid_argument("class-index backend limited to n <= 8");
  int n = eng.n();
  eng.mark_phase("agreement-recon");
  std::vector<std::function<Proc<AgreementOutcome>(NodeApi&)>> factories;
  for (NodeId w = 1; w <= n; ++w) {
    auto rows = rows_held_by(s, w);
    factories.push_back([&s, b, &cls, backend, rows](NodeApi& api) -> Proc<AgreementOutcome> {
      auto other = co_await cross_bits_program(api, s.assign, rows);
      co_return co_await agreement_program(api, s.assign, b, &cls, backend, rows,
                                           std::move(other));
    });
  }
  return eng.run_phase<AgreementOutcome>(factories);
}

double class_blowup_bound(const HereditaryClass& cls, int n, int b) {
  if (n < 1 || b < 0 || b > n) throw std::invalid_argument("class_blowup_bound: bad n or b");
  double log_binom = std::lgamma(n + 1.0) - std::lgamma(b + 1.0) - std::lgamma(n - b + 1.0);
  return class_growth_bits(cls, n) + log_binom / std::log(2.0) + static_cast<double>(b) * n;
}

uint64_t graph_mask(const Graph& g) {
  int n = g.node_count();
  uint64_t mask = 0;
  int idx = 0;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v, ++idx)
      if (g.has_edge(u, v)) mask |= uint64_t{1} << idx;
  return mask;
}

Graph graph_from_mask(uint64_t mask, int n) {
  Graph g(n);
  int idx = 0;
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v, ++idx)
      if ((mask >> idx) & 1u) g.add_edge(u, v);
  return g;
}

std::vector<uint64_t> enumerate_blowup(const HereditaryClass& cls, int n, int b) {
  if (n < 1 || n > 7) throw std::invalid_argument("enumerate_blowup: n must be in [1,7]");
  if (b < 0 || b > n) throw std::invalid_argument("enumerate_blowup: bad b");
  int pairs = n * (n - 1) / 2;
  uint64_t total = uint64_t{1} << pairs;

  std::vector<uint64_t> members;
  uint64_t all_vertices = n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1;
  for (uint64_t mask = 0; mask < total; ++mask) {
    if (mask_membership(cls, graph_from_mask(mask, n), all_vertices)) members.push_back(mask);
  }

  // Incident / internal pair masks per Byzantine placement.
  std::vector<char> seen(total, 0);
  long long work = 0;
  const long long budget = 1LL << 26;

  std::vector<int> choice;
  // Iterate all size-b subsets of {1..n}.
  std::function<void(int, int)> per_subset = [&](int start, int depth) {
    if (depth == b) {
      uint64_t incident = 0, internal = 0;
      int idx = 0;
      for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v, ++idx) {
          bool ub = std::find(choice.begin(), choice.end(), u) != choice.end();
          bool vb = std::find(choice.begin(), choice.end(), v) != choice.end();
          if (ub && vb) internal |= uint64_t{1} << idx;
          else if (ub || vb) incident |= uint64_t{1} << idx;
        }
      }
      for (uint64_t g : members) {
        uint64_t base = g & ~(incident | internal);
        uint64_t hb = g & incident;  // honest-Byzantine edges: removable only
        // Subsets of hb (deletion patterns), then any internal pattern.
        uint64_t del = hb;
        while (true) {
          uint64_t kept = base | (hb & ~del);
          uint64_t pat = internal;
          while (true) {
            if ((work += 1) > budget)
              throw BlowupBudgetError("enumerate_blowup: budget exceeded");
            seen[kept | pat] = 1;
            if (pat == 0) break;
            pat = (pat - 1) & internal;
          }
          if (del == 0) break;
          del = (del - 1) & hb;
        }
      }
      return;
    }
    for (int v = start; v <= n; ++v) {
      choice.push_back(v);
      per_subset(v + 1, depth + 1);
      choice.pop_back();
    }
  };
  if (b == 0) {
    for (uint64_t g : members) seen[g] = 1;
  } else {
    per_subset(1, 0);
  }

  std::vector<uint64_t> out;
  for (uint64_t mask = 0; mask < total; ++mask)
    if (seen[mask]) out.push_back(mask);
  return out;
}

int broadcast_words_per_node(int n, int word_bits) { return (n + word_bits - 1) / word_bits; }

int class_index_words_per_node(const HereditaryClass& cls, int n, int b, int word_bits) {
  auto family = enumerate_blowup(cls, n, b);
  int bits = bits_for(family.size() + 1);
  int total_words = (bits + word_bits - 1) / word_bits;
  return std::max(1, (total_words + n - 1) / n);
}

}  // namespace byz
