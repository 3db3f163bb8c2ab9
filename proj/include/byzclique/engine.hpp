#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "byzclique/proc.hpp"

namespace byz {

using NodeId = int;  // 1-based

struct TranscriptEntry {
  long long round;
  NodeId sender;
  NodeId receiver;
  uint64_t payload;
  bool operator==(const TranscriptEntry&) const = default;
};

/// Append-only log of every word that crossed a link.
struct Transcript {
  std::vector<TranscriptEntry> entries;

  /// Entries with the given node as sender or receiver.
  std::vector<TranscriptEntry> projection(NodeId v) const;
  /// Line-oriented export: `round sender receiver hex(payload)`.
  std::string to_lines() const;
  bool operator==(const Transcript&) const = default;
};

struct Delivery {
  NodeId sender;
  uint64_t payload;
};

struct PhaseMark {
  std::string name;
  long long first_round;
  long long words_before;
};

struct RoundLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineConfig {
  int n = 0;
  uint64_t seed = 0;
  int min_word_bits = 32;
  long long round_limit = 1'000'000;
  bool record_transcript = true;
  std::set<NodeId> byzantine;  // resumed after honest nodes each round
};

class RoundEngine;

/// Per-node handle passed to node programs.
class NodeApi {
 public:
  NodeApi() = default;
  NodeApi(RoundEngine* eng, NodeId id) : eng_(eng), id_(id) {}

  NodeId id() const { return id_; }
  int n() const;
  int word_bits() const;
  long long round() const;

  /// Queue one word to `to`; per ordered link, one word crosses per round
  /// (FIFO). Payload is masked to word_bits.
  void send(NodeId to, uint64_t payload);

  /// Words delivered to this node at the current round.
  const std::vector<Delivery>& inbox() const;

  /// Common random bits, identical for every caller with the same label
  /// and index; a pure function of the engine seed.
  uint64_t coin(std::string_view label, uint64_t index) const;

  /// Awaitable: suspend until the next round has been delivered.
  auto next_round();

 private:
  RoundEngine* eng_ = nullptr;
  NodeId id_ = 0;
};

/// Deterministic synchronous-round engine over an n-node clique with
/// per-link bandwidth of one word per round.
class RoundEngine {
 public:
  explicit RoundEngine(EngineConfig cfg);

  int n() const { return cfg_.n; }
  int word_bits() const { return word_bits_; }
  uint64_t word_mask() const {
    return word_bits_ >= 64 ? ~uint64_t{0} : (uint64_t{1} << word_bits_) - 1;
  }
  long long round() const { return round_; }
  long long words_sent() const { return words_sent_; }
  const std::set<NodeId>& byzantine() const { return cfg_.byzantine; }
  const EngineConfig& config() const { return cfg_; }

  uint64_t shared_coin(std::string_view label, uint64_t index) const;

  const Transcript& transcript() const { return transcript_; }
  const std::vector<PhaseMark>& phase_marks() const { return phase_marks_; }
  void mark_phase(std::string name) {
    phase_marks_.push_back({std::move(name), round_, words_sent_});
  }

  /// Raw per-round adversary: invoked after all programs have produced
  /// their sends for the round, with read access to the words scheduled
  /// on every link. May rewrite only Byzantine-sourced traffic via
  /// adversary_put.
  using RawHook = std::function<void(RoundEngine&)>;
  void set_raw_hook(RawHook hook) { raw_hook_ = std::move(hook); }

  /// Words scheduled to cross links this round (valid inside the hook):
  /// (sender, receiver, payload) in deterministic order.
  const std::vector<std::tuple<NodeId, NodeId, uint64_t>>& scheduled_words() const {
    return scheduled_;
  }

  /// Overwrite (or inject) the word crossing link from->to this round.
  /// Only Byzantine senders are writable; anything else throws.
  void adversary_put(NodeId from, NodeId to, uint64_t payload);

  /// Words queued but not yet delivered (diagnostic).
  long long pending_words() const;

  /// Run one set of per-node programs to completion on this engine,
  /// preserving round counter and transcript across calls. Factory i is
  /// invoked with the NodeApi of node i+1; a null factory idles the node.
  template <class T>
  std::vector<T> run_phase(const std::vector<std::function<Proc<T>(NodeApi&)>>& factories) {
    static_assert(!std::is_void_v<T>, "phase programs must return a value");
    if (static_cast<int>(factories.size()) != cfg_.n)
      throw std::invalid_argument("run_phase: one program per node required");
    std::vector<NodeApi> apis;
    apis.reserve(cfg_.n);
    for (NodeId v = 1; v <= cfg_.n; ++v) apis.emplace_back(this, v);
    std::vector<Proc<T>> procs(cfg_.n);
    try {
      for (NodeId v : resume_order_) {
        if (factories[v - 1]) {
          procs[v - 1] = factories[v - 1](apis[v - 1]);
          procs[v - 1].start();
        }
      }
      while (!all_done(procs)) advance_round();
    } catch (...) {
      clear_parked();
      throw;
    }
    std::vector<T> results;
    results.reserve(cfg_.n);
    for (int i = 0; i < cfg_.n; ++i)
      results.push_back(factories[i] ? procs[i].result() : T{});
    return results;
  }

 private:
  friend class NodeApi;

  template <class T>
  static bool all_done(const std::vector<Proc<T>>& procs) {
    for (const auto& p : procs)
      if (!p.done()) return false;
    return true;
  }

  void advance_round();
  void park(NodeId v, std::coroutine_handle<> h);
  void enqueue(NodeId from, NodeId to, uint64_t payload);
  void clear_parked() {
    for (auto& h : parked_by_node_) h = nullptr;
  }
  int link_index(NodeId from, NodeId to) const {
    return (from - 1) * cfg_.n + (to - 1);
  }

  EngineConfig cfg_;
  int word_bits_;
  long long round_ = 0;
  long long words_sent_ = 0;
  Transcript transcript_;
  std::vector<PhaseMark> phase_marks_;

  std::vector<std::deque<uint64_t>> link_queues_;
  std::vector<int> busy_links_;  // kept in canonical order between rounds
  bool busy_links_sorted_ = true;
  std::vector<char> link_busy_flag_;
  std::vector<std::vector<Delivery>> inboxes_;  // current round, per node

  std::vector<std::coroutine_handle<>> parked_by_node_;
  std::vector<NodeId> resume_order_;  // honest ascending, then Byzantine

  RawHook raw_hook_;
  std::vector<std::tuple<NodeId, NodeId, uint64_t>> scheduled_;
  bool in_hook_ = false;
};

inline int NodeApi::n() const { return eng_->n(); }
inline int NodeApi::word_bits() const { return eng_->word_bits(); }
inline long long NodeApi::round() const { return eng_->round(); }
inline const std::vector<Delivery>& NodeApi::inbox() const { return eng_->inboxes_[id_ - 1]; }
inline uint64_t NodeApi::coin(std::string_view label, uint64_t index) const {
  return eng_->shared_coin(label, index);
}
inline void NodeApi::send(NodeId to, uint64_t payload) {
  eng_->enqueue(id_, to, payload & eng_->word_mask());
}
inline auto NodeApi::next_round() {
  struct Awaiter {
    RoundEngine* eng;
    NodeId id;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) { eng->park(id, h); }
    void await_resume() const noexcept {}
  };
  return Awaiter{eng_, id_};
}

}  // namespace byz
