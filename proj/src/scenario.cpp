#include "byzclique/scenario.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "byzclique/adversary.hpp"
#include "json.hpp"

namespace byz {

namespace {

using json = nlohmann::ordered_json;

uint64_t mix_seed(uint64_t seed) { return seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull; }

// Portable coin flips: std::*_distribution is implementation-defined, so
// draws come straight off the engine output.
uint64_t draw_mod(std::mt19937_64& rng, uint64_t m) { return rng() % m; }

bool draw_prob(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) < p * 9007199254740992.0;  // 2^53
}

GraphSource source_from_json(const json& j) {
  GraphSource src;
  src.kind = j.value("kind", src.kind);
  src.path = j.value("path", src.path);
  src.n = j.value("n", src.n);
  src.count = j.value("count", src.count);
  src.p = j.value("p", src.p);
  return src;
}

json source_to_json(const GraphSource& src) {
  json j;
  j["kind"] = src.kind;
  j["path"] = src.path;
  j["n"] = src.n;
  j["count"] = src.count;
  j["p"] = src.p;
  return j;
}

void check_schema(const json& j) {
  if (!j.contains("schema")) throw std::invalid_argument("config: missing schema field");
  if (j["schema"] != kConfigSchema)
    throw std::invalid_argument("config: unsupported schema version");
}

}  // namespace

Graph build_graph(const GraphSource& src, uint64_t seed) {
  if (src.kind == "file") {
    std::ifstream in(src.path);
    if (!in) throw std::runtime_error("cannot open graph file: " + src.path);
    return Graph::read_edge_list(in);
  }
  if (src.kind == "path" || src.kind == "cycle") {
    Graph g(src.n);
    for (int v = 2; v <= src.n; ++v) g.add_edge(v - 1, v);
    if (src.kind == "cycle") {
      if (src.n < 3) throw std::invalid_argument("cycle needs n >= 3");
      g.add_edge(src.n, 1);
    }
    return g;
  }
  if (src.kind == "triangles") {
    Graph g(3 * src.count);
    for (int i = 0; i < src.count; ++i) {
      int v = 3 * i + 1;
      g.add_edge(v, v + 1);
      g.add_edge(v + 1, v + 2);
      g.add_edge(v, v + 2);
    }
    return g;
  }
  if (src.kind == "random_forest") {
    Graph g(src.n);
    std::mt19937_64 rng(mix_seed(seed));
    for (int v = 2; v <= src.n; ++v) {
      // 0 starts a new component, otherwise attach to an earlier node.
      int parent = static_cast<int>(draw_mod(rng, static_cast<uint64_t>(v)));
      if (parent > 0) g.add_edge(parent, v);
    }
    return g;
  }
  if (src.kind == "gnp") {
    if (src.p < 0.0 || src.p > 1.0) throw std::invalid_argument("gnp: p outside [0,1]");
    Graph g(src.n);
    std::mt19937_64 rng(mix_seed(seed));
    for (int u = 1; u <= src.n; ++u)
      for (int v = u + 1; v <= src.n; ++v)
        if (draw_prob(rng, src.p)) g.add_edge(u, v);
    return g;
  }
  throw std::invalid_argument("unknown graph source kind: " + src.kind);
}

std::set<NodeId> resolve_byzantine(const Scenario& s, int n, uint64_t seed) {
  std::set<NodeId> byz;
  if (!s.byzantine.empty()) {
    for (NodeId v : s.byzantine) {
      if (v < 1 || v > n) throw std::invalid_argument("byzantine ID out of range");
      if (!byz.insert(v).second) throw std::invalid_argument("duplicate byzantine ID");
    }
    return byz;
  }
  int b = s.byzantine_count;
  if (b < 0 || b > n) throw std::invalid_argument("byzantine count out of range");
  if (s.placement == "spread") {
    for (int i = 0; i < b; ++i) byz.insert(1 + static_cast<NodeId>((int64_t)i * n / b));
  } else if (s.placement == "random") {
    std::mt19937_64 rng(mix_seed(seed ^ 0x42595a4ull));
    std::vector<NodeId> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i + 1;
    for (int i = 0; i < b; ++i) {
      std::swap(ids[i], ids[i + draw_mod(rng, static_cast<uint64_t>(n - i))]);
      byz.insert(ids[i]);
    }
  } else {
    throw std::invalid_argument("unknown placement rule: " + s.placement);
  }
  return byz;
}

Scenario parse_scenario(const std::string& json_text) {
  json j = json::parse(json_text);
  check_schema(j);
  Scenario s;
  if (j.contains("graph")) s.graph = source_from_json(j["graph"]);
  s.byzantine = j.value("byzantine", s.byzantine);
  s.byzantine_count = j.value("byzantine_count", s.byzantine_count);
  s.placement = j.value("placement", s.placement);
  s.strategy = j.value("strategy", s.strategy);
  s.class_name = j.value("class", s.class_name);
  s.backend = j.value("backend", s.backend);
  s.seed = j.value("seed", s.seed);
  s.word_bits = j.value("word_bits", s.word_bits);
  s.round_limit = j.value("round_limit", s.round_limit);
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["schema"] = s.schema;
  j["graph"] = source_to_json(s.graph);
  j["byzantine"] = s.byzantine;
  j["byzantine_count"] = s.byzantine_count;
  j["placement"] = s.placement;
  j["strategy"] = s.strategy;
  j["class"] = s.class_name;
  j["backend"] = s.backend;
  j["seed"] = s.seed;
  j["word_bits"] = s.word_bits;
  j["round_limit"] = s.round_limit;
  return j.dump(2) + "\n";
}

void validate_scenario(const Scenario& s) {
  Graph g = build_graph(s.graph, s.seed);
  int n = g.node_count();
  if (n < 1) throw std::invalid_argument("scenario graph is empty");
  auto byz = resolve_byzantine(s, n, s.seed);
  if (3 * static_cast<int>(byz.size()) >= n)
    throw std::invalid_argument("scenario needs 3|B| < n");
  class_by_name(s.class_name);   // throws on unknown name
  make_strategy(s.strategy);     // throws on unknown name
  if (s.backend != "broadcast" && s.backend != "class-index")
    throw std::invalid_argument("unknown backend: " + s.backend);
  if (s.word_bits < 2 || s.word_bits > 64)
    throw std::invalid_argument("word_bits outside [2,64]");
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str());
  validate_scenario(s);
  return s;
}

RunReport execute_scenario(const Scenario& s, uint64_t seed_override) {
  uint64_t seed = seed_override ? seed_override : s.seed;
  Graph g = build_graph(s.graph, seed);
  int n = g.node_count();
  auto byz = resolve_byzantine(s, n, seed);
  const auto& cls = class_by_name(s.class_name);
  auto strat = make_strategy(s.strategy);
  int b = static_cast<int>(byz.size());

  ProtocolOptions opts;
  opts.backend =
      s.backend == "class-index" ? AgreementBackend::kClassIndex : AgreementBackend::kBroadcast;
  long long cap = s.round_limit > 0 ? s.round_limit : round_budget(cls, n, b);

  // Reports stay deterministic without the transcript; recording it would
  // dominate memory and time across large sweeps.
  RoundEngine eng({.n = n,
                   .seed = seed,
                   .min_word_bits = s.word_bits,
                   .round_limit = cap,
                   .record_transcript = false,
                   .byzantine = byz});
  install_raw_hook(strat, eng);
  return run_recognition(eng, g, b, cls, bind_rows(strat, g, byz), opts);
}

SweepConfig parse_sweep(const std::string& json_text) {
  json j = json::parse(json_text);
  check_schema(j);
  SweepConfig cfg;
  if (j.contains("graph")) cfg.graph = source_from_json(j["graph"]);
  cfg.ns = j.value("n", cfg.ns);
  cfg.bs = j.value("b", cfg.bs);
  cfg.classes = j.value("classes", cfg.classes);
  cfg.strategies = j.value("strategies", cfg.strategies);
  cfg.seeds = j.value("seeds", cfg.seeds);
  if (cfg.seeds.empty() && j.contains("seed_count")) {
    uint64_t k = j["seed_count"];
    for (uint64_t i = 1; i <= k; ++i) cfg.seeds.push_back(i);
  }
  cfg.placement = j.value("placement", cfg.placement);
  cfg.backend = j.value("backend", cfg.backend);
  cfg.word_bits = j.value("word_bits", cfg.word_bits);
  return cfg;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers) {
  std::vector<SweepRow> rows;
  for (int n : cfg.ns)
    for (int b : cfg.bs)
      for (const auto& cls : cfg.classes)
        for (const auto& strat : cfg.strategies)
          for (uint64_t seed : cfg.seeds) {
            SweepRow r;
            r.n = n;
            r.b = b;
            r.class_name = cls;
            r.strategy = strat;
            r.seed = seed;
            rows.push_back(std::move(r));
          }

  auto run_row = [&cfg](SweepRow& r) {
    try {
      Scenario s;
      s.graph = cfg.graph;
      if (s.graph.kind == "triangles") {
        if (r.n % 3 != 0) throw std::invalid_argument("triangles grid needs n divisible by 3");
        s.graph.count = r.n / 3;
      } else if (s.graph.kind != "file") {
        s.graph.n = r.n;
      }
      s.byzantine_count = r.b;
      s.placement = cfg.placement;
      s.strategy = r.strategy;
      s.class_name = r.class_name;
      s.backend = cfg.backend;
      s.seed = r.seed;
      s.word_bits = cfg.word_bits;
      validate_scenario(s);
      RunReport rep = execute_scenario(s);
      if (rep.n != r.n) throw std::runtime_error("graph size does not match grid n");
      for (int d : rep.decisions) r.decisions += d ? '1' : '0';
      for (const auto& p : rep.phases) {
        if (p.name.rfind("structure-", 0) == 0) r.structure_rounds += p.rounds;
        if (p.name.rfind("recon-", 0) == 0) r.recon_rounds += p.rounds;
        if (p.name.rfind("verdict-", 0) == 0) r.verdict_rounds += p.rounds;
      }
      r.total_rounds = rep.total_rounds;
      r.total_words = rep.total_words;
      r.structures_valid = rep.structures_valid;
      r.flagged = rep.flagged;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  };

  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<int>(workers, static_cast<int>(rows.size())); ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < rows.size(); i = next.fetch_add(1)) run_row(rows[i]);
    });
  }
  for (auto& t : pool) t.join();
  return rows;
}

std::string sweep_csv_header() {
  return "n,b,class,strategy,seed,decisions,structure_rounds,recon_rounds,verdict_rounds,"
         "total_rounds,total_words,structures_valid,flagged,error";
}

std::string sweep_csv_row(const SweepRow& r) {
  std::string err = r.error;
  for (char& c : err)
    if (c == ',' || c == '\n') c = ';';
  std::ostringstream os;
  os << r.n << ',' << r.b << ',' << r.class_name << ',' << r.strategy << ',' << r.seed << ','
     << r.decisions << ',' << r.structure_rounds << ',' << r.recon_rounds << ','
     << r.verdict_rounds << ',' << r.total_rounds << ',' << r.total_words << ','
     << r.structures_valid << ',' << r.flagged << ',' << err;
  return os.str();
}

}  // namespace byz
