#include <cmath>
#include <set>

#include "byzclique/farness.hpp"
#include "byzclique/recon.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace byz;
using namespace byztest;

namespace {

RowProvider constant_row(uint64_t row) {
  return [row](NodeId, NodeId) { return row; };
}

}  // namespace

TEST_CASE("ground truth view") {
  SUBCASE("all honest: A = E, D empty") {
    RoundEngine eng({.n = 6, .seed = 4});
    Graph g = make_cycle(6);
    auto s = build_committee_structure(eng, "structure", g, 0);
    auto view = ground_truth_view(s);
    CHECK(view.agreement == g);
    CHECK(view.disagreement.edge_count() == 0);
  }

  SUBCASE("one Byzantine claiming a fake edge puts it in D") {
    RoundEngine eng({.n = 6, .seed = 4, .byzantine = {2}});
    Graph g = make_path(6);
    uint64_t fake = g.row(2) | (uint64_t{1} << 4);  // claim {2,5}
    auto s = build_committee_structure(eng, "structure", g, 1, {}, constant_row(fake));
    auto view = ground_truth_view(s);
    CHECK(view.disagreement.has_edge(2, 5));
    CHECK(view.disagreement.edge_count() == 1);
    CHECK(view.agreement == g);
  }

  SUBCASE("two Byzantine jointly faking an edge land it in A minus E") {
    RoundEngine eng({.n = 7, .seed = 5, .byzantine = {2, 5}});
    Graph g = make_path(7);
    REQUIRE_FALSE(g.has_edge(2, 5));
    RowProvider claim = [&g](NodeId v, NodeId) {
      uint64_t other = v == 2 ? 5 : 2;
      return g.row(v) | (uint64_t{1} << (other - 1));
    };
    auto s = build_committee_structure(eng, "structure", g, 2, {}, claim);
    auto view = ground_truth_view(s);
    CHECK(view.agreement.has_edge(2, 5));
    CHECK_FALSE(view.disagreement.has_edge(2, 5));
  }
}

TEST_CASE("disagreement reconstruction equals the oracle") {
  SUBCASE("no disagreement") {
    RoundEngine eng({.n = 6, .seed = 7});
    Graph g = make_path(6);
    auto s = build_committee_structure(eng, "structure", g, 0);
    auto outs = reconstruct_disagreement(eng, s, 0);
    for (const auto& o : outs) {
      CHECK(o.d.edge_count() == 0);
      CHECK_FALSE(o.truncated);
    }
  }

  SUBCASE("fake-edge Byzantine: every node reconstructs exactly D") {
    RoundEngine eng({.n = 7, .seed = 9, .byzantine = {3}});
    Graph g = make_path(7);
    uint64_t fake = g.row(3) | (uint64_t{1} << 5);  // claim {3,6}
    auto s = build_committee_structure(eng, "structure", g, 1, {}, constant_row(fake));
    auto truth = ground_truth_view(s);
    REQUIRE(truth.disagreement.has_edge(3, 6));
    auto outs = reconstruct_disagreement(eng, s, 1);
    for (NodeId w = 1; w <= 7; ++w) {
      if (w == 3) continue;
      CHECK(outs[w - 1].d == truth.disagreement);
    }
  }

  SUBCASE("mass equivocator lands in V+ and V+ stays inside B") {
    // Byzantine node 4 denies all of its edges; its disagreement degree
    // exceeds |B| = 1, so it is classified necessarily Byzantine.
    RoundEngine eng({.n = 7, .seed = 11, .byzantine = {4}});
    Graph g = make_cycle(7);  // node 4 has two true edges
    auto s = build_committee_structure(eng, "structure", g, 1, {}, constant_row(0));
    auto truth = ground_truth_view(s);
    REQUIRE(truth.disagreement.degree(4) == 2);
    auto outs = reconstruct_disagreement(eng, s, 1);
    for (NodeId w = 1; w <= 7; ++w) {
      if (w == 4) continue;
      const auto& o = outs[w - 1];
      CHECK(o.d == truth.disagreement);
      for (NodeId u = 1; u <= 7; ++u) {
        if (o.degrees[u - 1] > 1) CHECK(u == 4);  // V+ is Byzantine-only
        if (u != 4) CHECK(o.degrees[u - 1] <= 1);  // honest degree bound
      }
    }
  }

  SUBCASE("two Byzantine with a disagreement edge between V+ nodes") {
    RoundEngine eng({.n = 9, .seed = 13, .byzantine = {2, 6}});
    Graph g = make_cycle(9);
    // Node 2 denies everything while node 6 claims everything: both rack up
    // disagreement degree above |B| = 2 and land in V+, and the {2,6}
    // disagreement must be reported through the V+ rule.
    RowProvider split = [&g](NodeId v, NodeId) {
      return v == 2 ? uint64_t{0} : (g.full_mask() & ~(uint64_t{1} << (v - 1)));
    };
    auto s = build_committee_structure(eng, "structure", g, 2, {}, split);
    auto truth = ground_truth_view(s);
    REQUIRE(truth.disagreement.has_edge(2, 6));
    auto outs = reconstruct_disagreement(eng, s, 2);
    for (NodeId w = 1; w <= 9; ++w) {
      if (w == 2 || w == 6) continue;
      CHECK(outs[w - 1].d == truth.disagreement);
    }
  }
}

TEST_CASE("agreement reconstruction") {
  SUBCASE("all honest forest, both backends") {
    for (auto backend : {AgreementBackend::kBroadcast, AgreementBackend::kClassIndex}) {
      RoundEngine eng({.n = 6, .seed = 3});
      Graph g = make_path(6);
      auto s = build_committee_structure(eng, "structure", g, 0);
      auto outs = reconstruct_agreement(eng, s, 0, forests_class(), backend);
      for (const auto& o : outs) {
        CHECK_FALSE(o.rejected);
        CHECK(o.a == g);
      }
    }
  }

  SUBCASE("deny-edge Byzantine, broadcast backend reconstructs A exactly") {
    RoundEngine eng({.n = 8, .seed = 21, .byzantine = {5}});
    Graph g = make_cycle(8);
    auto s = build_committee_structure(eng, "structure", g, 1, {}, constant_row(0));
    auto truth = ground_truth_view(s);
    auto outs = reconstruct_agreement(eng, s, 1, forests_class(), AgreementBackend::kBroadcast);
    for (NodeId w = 1; w <= 8; ++w) {
      if (w == 5) continue;
      CHECK_FALSE(outs[w - 1].rejected);
      CHECK(outs[w - 1].a == truth.agreement);
    }
  }

  SUBCASE("class-index rejects K5 against forests, which certifies non-membership") {
    RoundEngine eng({.n = 5, .seed = 2});
    Graph g = make_complete(5);
    auto s = build_committee_structure(eng, "structure", g, 1);
    auto outs = reconstruct_agreement(eng, s, 1, forests_class(), AgreementBackend::kClassIndex);
    for (const auto& o : outs) CHECK(o.rejected);
    CHECK_FALSE(membership(forests_class(), g));
  }

  SUBCASE("class-index reconstructs a forest with a Byzantine denier") {
    RoundEngine eng({.n = 6, .seed = 31, .byzantine = {2}});
    Graph g = make_path(6);
    auto s = build_committee_structure(eng, "structure", g, 1, {}, constant_row(0));
    auto truth = ground_truth_view(s);
    auto outs = reconstruct_agreement(eng, s, 1, forests_class(), AgreementBackend::kClassIndex);
    for (NodeId w = 1; w <= 6; ++w) {
      if (w == 2) continue;
      CHECK_FALSE(outs[w - 1].rejected);
      CHECK(outs[w - 1].a == truth.agreement);
    }
  }

  SUBCASE("class-index refused beyond n=8") {
    RoundEngine eng({.n = 9, .seed = 1});
    Graph g = make_path(9);
    auto s = build_committee_structure(eng, "structure", g, 0);
    CHECK_THROWS_AS(
        reconstruct_agreement(eng, s, 0, forests_class(), AgreementBackend::kClassIndex),
        std::invalid_argument);
  }
}

TEST_CASE("blow-up enumeration") {
  // With one Byzantine node and forests, edges can only disappear, so the
  // family is exactly the forests themselves.
  auto fam = enumerate_blowup(forests_class(), 4, 1);
  CHECK(fam.size() == enumerate_class_count(forests_class(), 4));

  // b=0 is the class itself for every built-in.
  for (const auto* cls : builtin_classes()) {
    CHECK(enumerate_blowup(*cls, 4, 0).size() == enumerate_class_count(*cls, 4));
  }

  // A Byzantine member of a cluster graph can delete one K3 edge, leaving a
  // P3 outside the class: the family strictly exceeds the class.
  auto cfam = enumerate_blowup(cluster_class(), 3, 1);
  Graph p3 = make_path(3);
  CHECK_FALSE(membership(cluster_class(), p3));
  CHECK(std::find(cfam.begin(), cfam.end(), graph_mask(p3)) != cfam.end());

  // Two colluding Byzantine nodes can invent an edge closing a triangle.
  auto tfam = enumerate_blowup(triangle_free_class(), 3, 2);
  CHECK(std::find(tfam.begin(), tfam.end(), graph_mask(make_complete(3))) != tfam.end());

  // Round trips of the mask encoding.
  Graph g = make_cycle(5);
  CHECK(graph_from_mask(graph_mask(g), 5) == g);
}

TEST_CASE("cardinality bound") {
  for (const auto* cls : builtin_classes()) {
    CHECK(class_blowup_bound(*cls, 5, 0) == doctest::Approx(class_growth_bits(*cls, 5)));
    double prev = -1;
    for (int b = 0; b <= 3; ++b) {
      double bound = class_blowup_bound(*cls, 6, b);
      CHECK(bound >= prev);
      prev = bound;
    }
  }
  auto fam = enumerate_blowup(forests_class(), 4, 1);
  CHECK(std::log2(static_cast<double>(fam.size())) <= class_blowup_bound(forests_class(), 4, 1));
}

TEST_CASE("index backend transmits fewer words per node at n=5") {
  int wb = 3;  // minimal word size for n = 5
  int broadcast = broadcast_words_per_node(5, wb);
  int indexed = class_index_words_per_node(forests_class(), 5, 1, wb);
  CHECK(broadcast == 2);
  CHECK(indexed == 1);
  CHECK(indexed < broadcast);
}

TEST_CASE("disagreement recon rounds grow mildly") {
  auto measure = [](int n, int b) {
    std::set<NodeId> byz;
    for (int i = 0; i < b; ++i) byz.insert(2 + 3 * i);
    RoundEngine eng({.n = n, .seed = 77, .byzantine = byz});
    Graph g = make_cycle(n);
    auto s = build_committee_structure(eng, "structure", g, b, {}, constant_row(0));
    long long before = eng.round();
    reconstruct_disagreement(eng, s, b);
    return eng.round() - before;
  };
  int lg8 = ceil_log2(8), lg16 = ceil_log2(16);
  long long r81 = measure(8, 1), r161 = measure(16, 1), r162 = measure(16, 2);
  // one shared constant c with rounds <= c * b * log2(n)^2
  long long c = 40;
  CHECK(r81 <= c * 1 * lg8 * lg8);
  CHECK(r161 <= c * 1 * lg16 * lg16);
  CHECK(r162 <= c * 2 * lg16 * lg16);
}
