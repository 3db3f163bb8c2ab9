#include "byzclique/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace byz {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

int required_word_bits(int n, int min_bits) {
  int need = 1;
  while ((1LL << need) < n) ++need;
  return std::min(64, std::max(need, min_bits));
}

}  // namespace

std::vector<TranscriptEntry> Transcript::projection(NodeId v) const {
  std::vector<TranscriptEntry> out;
  for (const auto& e : entries) {
    if (e.sender == v || e.receiver == v) out.push_back(e);
  }
  return out;
}

std::string Transcript::to_lines() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << e.round << " " << e.sender << " " << e.receiver << " " << std::hex << e.payload
       << std::dec << "\n";
  }
  return os.str();
}

RoundEngine::RoundEngine(EngineConfig cfg)
    : cfg_(std::move(cfg)), word_bits_(required_word_bits(cfg_.n, cfg_.min_word_bits)) {
  if (cfg_.n < 1 || cfg_.n > (1 << 16)) throw std::invalid_argument("engine: n out of range");
  for (NodeId b : cfg_.byzantine) {
    if (b < 1 || b > cfg_.n) throw std::invalid_argument("engine: Byzantine ID out of range");
  }
  // No fault-tolerance bound here: the transport carries any corruption
  // pattern, protocol entry points enforce their own |B| requirements.
  link_queues_.resize(static_cast<size_t>(cfg_.n) * cfg_.n);
  link_busy_flag_.assign(link_queues_.size(), 0);
  inboxes_.resize(cfg_.n);
  parked_by_node_.assign(cfg_.n, nullptr);
  for (NodeId v = 1; v <= cfg_.n; ++v)
    if (!cfg_.byzantine.count(v)) resume_order_.push_back(v);
  for (NodeId v : cfg_.byzantine) resume_order_.push_back(v);
}

uint64_t RoundEngine::shared_coin(std::string_view label, uint64_t index) const {
  uint64_t h = fnv1a(label);
  h = splitmix64(h ^ splitmix64(cfg_.seed));
  return splitmix64(h ^ (index * 0xD1B54A32D192ED03ULL));
}

void RoundEngine::adversary_put(NodeId from, NodeId to, uint64_t payload) {
  if (!in_hook_) throw std::logic_error("adversary_put outside adversary hook");
  if (!cfg_.byzantine.count(from))
    throw std::logic_error("adversary may write only Byzantine outboxes");
  if (to < 1 || to > cfg_.n || to == from) throw std::invalid_argument("adversary_put: bad link");
  payload &= word_mask();
  for (auto& [f, t, p] : scheduled_) {
    if (f == from && t == to) {
      p = payload;
      return;
    }
  }
  scheduled_.emplace_back(from, to, payload);
}

long long RoundEngine::pending_words() const {
  long long total = 0;
  for (const auto& q : link_queues_) total += static_cast<long long>(q.size());
  return total;
}

void RoundEngine::park(NodeId v, std::coroutine_handle<> h) { parked_by_node_[v - 1] = h; }

void RoundEngine::enqueue(NodeId from, NodeId to, uint64_t payload) {
  if (to < 1 || to > cfg_.n || to == from) throw std::invalid_argument("send: bad receiver");
  int li = link_index(from, to);
  if (!link_busy_flag_[li]) {
    link_busy_flag_[li] = 1;
    busy_links_.push_back(li);
    busy_links_sorted_ = false;
  }
  link_queues_[li].push_back(payload);
}

void RoundEngine::advance_round() {
  if (round_ >= cfg_.round_limit)
    throw RoundLimitError("round limit exceeded at round " + std::to_string(round_));

  // One word per busy link crosses this round, in canonical link order so
  // the transcript does not depend on program scheduling details. Draining
  // preserves order, so sorting is only needed after new links appear.
  if (!busy_links_sorted_) {
    std::sort(busy_links_.begin(), busy_links_.end());
    busy_links_sorted_ = true;
  }
  scheduled_.clear();
  std::vector<int> still_busy;
  for (int li : busy_links_) {
    auto& q = link_queues_[li];
    NodeId from = li / cfg_.n + 1;
    NodeId to = li % cfg_.n + 1;
    scheduled_.emplace_back(from, to, q.front());
    q.pop_front();
    if (q.empty()) {
      link_busy_flag_[li] = 0;
    } else {
      still_busy.push_back(li);
    }
  }
  busy_links_.swap(still_busy);

  // Rushing adversary: sees every scheduled word, rewrites Byzantine ones.
  if (raw_hook_) {
    in_hook_ = true;
    raw_hook_(*this);
    in_hook_ = false;
  }

  for (auto& box : inboxes_) box.clear();
  for (const auto& [from, to, payload] : scheduled_) {
    if (cfg_.record_transcript) transcript_.entries.push_back({round_, from, to, payload});
    ++words_sent_;
    inboxes_[to - 1].push_back({from, payload});
  }

  ++round_;

  // Wake programs waiting for this round, honest nodes first.
  auto waking = std::move(parked_by_node_);
  parked_by_node_.assign(cfg_.n, nullptr);
  for (NodeId v : resume_order_) {
    if (waking[v - 1]) waking[v - 1].resume();
  }
}

}  // namespace byz
