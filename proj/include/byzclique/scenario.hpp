#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "byzclique/protocol.hpp"

namespace byz {

constexpr int kConfigSchema = 1;

/// Where a scenario graph comes from: an edge-list file or one of the
/// built-in generators (path, cycle, triangles, random_forest, gnp).
struct GraphSource {
  std::string kind = "path";
  std::string path;  // kind == "file"
  int n = 0;         // node count (triangles: 3 per unit of `count`)
  int count = 0;     // kind == "triangles"
  double p = 0.0;    // kind == "gnp"

  bool operator==(const GraphSource&) const = default;
};

/// One experiment: graph, Byzantine set, adversary strategy, class under
/// test, seed, and engine caps.
struct Scenario {
  int schema = kConfigSchema;
  GraphSource graph;
  std::vector<NodeId> byzantine;     // explicit list; wins over the count
  int byzantine_count = 0;           // placed by the named rule when list empty
  std::string placement = "spread";  // spread | random
  std::string strategy = "honest-mimic";
  std::string class_name = "forests";
  std::string backend = "broadcast";  // broadcast | class-index
  uint64_t seed = 1;
  int word_bits = 32;
  long long round_limit = 0;  // 0: derive from round_budget

  bool operator==(const Scenario&) const = default;
};

/// Deterministic graph construction; the seed only feeds the random
/// generators (random_forest, gnp).
Graph build_graph(const GraphSource& src, uint64_t seed);

/// The Byzantine set for an n-node run: the explicit list, or
/// byzantine_count nodes placed by the rule ("spread" = evenly spaced,
/// "random" = seed-derived sample).
std::set<NodeId> resolve_byzantine(const Scenario& s, int n, uint64_t seed);

Scenario parse_scenario(const std::string& json_text);
std::string serialize_scenario(const Scenario& s);

/// Read, parse, and validate: builds the graph, resolves every name, and
/// enforces 3|B| < n. Throws std::invalid_argument / std::runtime_error
/// with a diagnostic.
Scenario load_scenario(const std::string& path);
void validate_scenario(const Scenario& s);

/// Build the engine, install the strategy, and run the recognition
/// protocol; seed 0 means "use the scenario's own seed".
RunReport execute_scenario(const Scenario& s, uint64_t seed_override = 0);

/// A parameter grid swept cell by cell: the graph source is a template
/// whose size fields are overridden by each grid n.
struct SweepConfig {
  int schema = kConfigSchema;
  GraphSource graph;
  std::vector<int> ns;
  std::vector<int> bs;
  std::vector<std::string> classes;
  std::vector<std::string> strategies;
  std::vector<uint64_t> seeds;
  std::string placement = "spread";
  std::string backend = "broadcast";
  int word_bits = 32;
};

SweepConfig parse_sweep(const std::string& json_text);

struct SweepRow {
  int n = 0;
  int b = 0;
  std::string class_name;
  std::string strategy;
  uint64_t seed = 0;
  std::string decisions;  // per-node digits, node 1 first
  long long structure_rounds = 0;
  long long recon_rounds = 0;
  long long verdict_rounds = 0;
  long long total_rounds = 0;
  long long total_words = 0;
  bool structures_valid = false;
  bool flagged = false;
  std::string error;  // nonempty: the run failed, other fields best-effort
};

/// Run every grid cell x seed; failures become rows with the error field
/// set and the sweep continues. Rows come back in grid order regardless
/// of the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers = 0);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& r);

}  // namespace byz
