#include <cstdio>
#include <fstream>

#include "byzclique/scenario.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace byz;
using namespace byztest;

TEST_CASE("generators") {
  CHECK(build_graph({.kind = "path", .n = 6}, 1) == make_path(6));
  CHECK(build_graph({.kind = "cycle", .n = 6}, 1) == make_cycle(6));
  CHECK(build_graph({.kind = "triangles", .count = 3}, 1) == make_triangles(3));

  Graph f = build_graph({.kind = "random_forest", .n = 12}, 7);
  CHECK(membership(forests_class(), f));
  CHECK(f == build_graph({.kind = "random_forest", .n = 12}, 7));
  CHECK(f != build_graph({.kind = "random_forest", .n = 12}, 8));

  Graph dense = build_graph({.kind = "gnp", .n = 10, .p = 0.9}, 3);
  Graph sparse = build_graph({.kind = "gnp", .n = 10, .p = 0.1}, 3);
  CHECK(dense.edge_count() > sparse.edge_count());
  CHECK(build_graph({.kind = "gnp", .n = 10, .p = 0.0}, 3).edge_count() == 0);
  CHECK(build_graph({.kind = "gnp", .n = 10, .p = 1.0}, 3).edge_count() == 45);

  CHECK_THROWS_AS(build_graph({.kind = "torus", .n = 4}, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({.kind = "cycle", .n = 2}, 1), std::invalid_argument);
}

TEST_CASE("byzantine placement") {
  Scenario s;
  s.byzantine = {2, 7};
  CHECK(resolve_byzantine(s, 8, 1) == std::set<NodeId>{2, 7});
  s.byzantine = {2, 2};
  CHECK_THROWS_AS(resolve_byzantine(s, 8, 1), std::invalid_argument);
  s.byzantine = {9};
  CHECK_THROWS_AS(resolve_byzantine(s, 8, 1), std::invalid_argument);

  s.byzantine.clear();
  s.byzantine_count = 3;
  auto spread = resolve_byzantine(s, 12, 1);
  CHECK(spread == std::set<NodeId>{1, 5, 9});

  s.placement = "random";
  auto r1 = resolve_byzantine(s, 12, 1);
  CHECK(r1.size() == 3);
  CHECK(r1 == resolve_byzantine(s, 12, 1));
  for (NodeId v : r1) CHECK((v >= 1 && v <= 12));

  s.placement = "corners";
  CHECK_THROWS_AS(resolve_byzantine(s, 12, 1), std::invalid_argument);
}

TEST_CASE("config round trip is idempotent") {
  Scenario s;
  s.graph = {.kind = "triangles", .count = 4};
  s.byzantine = {3, 8};
  s.strategy = "fake-edge";
  s.class_name = "cluster";
  s.seed = 99;
  s.word_bits = 16;

  std::string once = serialize_scenario(s);
  std::string twice = serialize_scenario(parse_scenario(once));
  CHECK(once == twice);
  CHECK(parse_scenario(once) == s);

  // Sparse configs fill in the documented defaults.
  Scenario sparse = parse_scenario(R"({"schema":1,"graph":{"kind":"path","n":6}})");
  CHECK(sparse.strategy == "honest-mimic");
  CHECK(sparse.class_name == "forests");
  CHECK(sparse.seed == 1);
  CHECK(serialize_scenario(parse_scenario(serialize_scenario(sparse))) ==
        serialize_scenario(sparse));
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS(parse_scenario("not json at all"));
  CHECK_THROWS_AS(parse_scenario(R"({"graph":{"kind":"path","n":6}})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scenario(R"({"schema":7})"), std::invalid_argument);

  Scenario s;
  s.graph = {.kind = "path", .n = 9};
  s.byzantine = {1, 2, 3};  // 3|B| = n
  CHECK_THROWS_AS(validate_scenario(s), std::invalid_argument);
  s.byzantine = {1, 2};
  CHECK_NOTHROW(validate_scenario(s));
  s.class_name = "planar";
  CHECK_THROWS(validate_scenario(s));
  s.class_name = "forests";
  s.strategy = "jam";
  CHECK_THROWS_AS(validate_scenario(s), std::invalid_argument);
  s.strategy = "deny-edge";
  s.backend = "carrier-pigeon";
  CHECK_THROWS_AS(validate_scenario(s), std::invalid_argument);
}

TEST_CASE("execute_scenario honors seed override and reproduces") {
  Scenario s;
  s.graph = {.kind = "random_forest", .n = 9};
  s.byzantine_count = 2;
  s.strategy = "deny-edge";
  s.seed = 5;
  auto a = execute_scenario(s);
  auto b = execute_scenario(s);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.honest_unanimous(1));
  auto c = execute_scenario(s, 6);
  CHECK(a.to_json() != c.to_json());
}

TEST_CASE("sweep grid order, reproducibility, and partial failure") {
  SweepConfig cfg = parse_sweep(R"({
    "schema": 1,
    "graph": {"kind": "triangles"},
    "n": [6, 7],
    "b": [1],
    "classes": ["forests"],
    "strategies": ["honest-mimic", "deny-edge"],
    "seed_count": 2
  })");
  CHECK(cfg.seeds == std::vector<uint64_t>{1, 2});
  auto rows = run_sweep(cfg, 2);
  REQUIRE(rows.size() == 8);
  // Grid order: n outermost, seed innermost.
  CHECK(rows[0].n == 6);
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);
  CHECK(rows[4].n == 7);
  for (const auto& r : rows) {
    if (r.n == 7) {
      CHECK(r.error != "");  // 7 is not divisible by 3; sweep continued anyway
    } else {
      CHECK(r.error == "");
      CHECK(r.decisions == "000000");  // 1-far triangles, honest nodes reject
      CHECK(r.structure_rounds > 0);
      CHECK(r.recon_rounds > 0);
      CHECK(r.verdict_rounds > 0);
      CHECK(r.total_rounds >= r.structure_rounds + r.recon_rounds + r.verdict_rounds);
    }
  }
  auto again = run_sweep(cfg, 1);
  for (size_t i = 0; i < rows.size(); ++i) CHECK(sweep_csv_row(rows[i]) == sweep_csv_row(again[i]));

  SweepConfig empty;
  CHECK(run_sweep(empty).empty());
  CHECK(sweep_csv_header().substr(0, 4) == "n,b,");
}

TEST_CASE("scenario file loading") {
  Scenario s;
  s.graph = {.kind = "cycle", .n = 8};
  s.byzantine_count = 2;
  std::string path = "cli_config_test.json";
  {
    std::ofstream of(path);
    of << serialize_scenario(s);
  }
  Scenario loaded = load_scenario(path);
  CHECK(loaded == s);
  CHECK_THROWS(load_scenario("does_not_exist.json"));
  std::remove(path.c_str());
}
