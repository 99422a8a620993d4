#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prograph/action.hpp"

namespace prograph {
namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

Graph cycle(std::int64_t m) {
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (std::int64_t x = 0; x < m; ++x) {
    vs.push_back(vertex("P", x));
    vs.push_back(vertex("Q", x));
    es.push_back({edge("e0", x), vertex("P", x), vertex("Q", x)});
    es.push_back({edge("e1", x), vertex("P", x), vertex("Q", mod(x - 1, m))});
  }
  return make_graph(vs, es);
}

// Dihedral group of order 2m as pairs (x, b), element index 2x + b.
GroupTable dihedral(std::int64_t m) {
  std::vector<std::string> labels;
  for (std::int64_t x = 0; x < m; ++x) {
    labels.push_back("(" + std::to_string(x) + ",0)");
    labels.push_back("(" + std::to_string(x) + ",1)");
  }
  return make_group(
      labels,
      [m](Element u, Element v) {
        std::int64_t x = u / 2, a = u % 2, y = v / 2, b = v % 2;
        return static_cast<Element>(2 * mod(x + (a ? -y : y), m) + (a ^ b));
      },
      {1, 2});
}

CellId act_on_cycle(std::int64_t m, std::int64_t a, std::int64_t b, const CellId& c) {
  const std::int64_t x = c.index;
  if (c.tag == "P") return vertex("P", mod(a + (b ? -x : x), m));
  if (c.tag == "Q") return vertex("Q", mod(b ? a - x - 1 : a + x, m));
  const std::int64_t g = c.tag == "e1";
  return edge((g ^ b) ? "e1" : "e0", mod(a + (b ? -x : x), m));
}

GraphAction dihedral_on_cycle(std::int64_t m) {
  GraphAction a{dihedral(m), cycle(m), {}};
  for (Element g = 0; g < a.group.order(); ++g) {
    CellMap map;
    for (const auto& c : a.graph.cells()) map.emplace(c, act_on_cycle(m, g / 2, g % 2, c));
    a.act.push_back(std::move(map));
  }
  return a;
}

GraphAction trivial_on(const Graph& g) {
  GraphAction a{trivial_group(), g, {}};
  a.act.push_back(identity_morphism(g).map);
  return a;
}

TEST(GroupTable, CyclicAndDihedralAreValid) {
  EXPECT_EQ(cyclic_group(5).order(), 5u);
  GroupTable d = dihedral(9);
  EXPECT_EQ(d.order(), 18u);
  EXPECT_EQ(d.element_order(d.find("(0,1)")), 2u);
  EXPECT_EQ(d.element_order(d.find("(1,0)")), 9u);
}

TEST(GroupTable, RejectsNonAssociativeTable) {
  // Latin square with identity 0 that is not a group (order 5 loop).
  std::vector<std::vector<Element>> t{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    GroupTable({"a", "b", "c", "d", "e"}, t, {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidGroup);
  }
}

TEST(GroupTable, RejectsNonGeneratingSet) {
  EXPECT_THROW(GroupTable({"0", "1"}, {{0, 1}, {1, 0}}, {}), Error);
}

TEST(Subgroup, ValidationAndNormality) {
  GroupTable d = dihedral(3);
  Subgroup rot = Subgroup::generated_by(d, {d.find("(1,0)")});
  EXPECT_EQ(rot.order(), 3u);
  EXPECT_TRUE(rot.is_normal());
  Subgroup refl = Subgroup::generated_by(d, {d.find("(0,1)")});
  EXPECT_EQ(refl.order(), 2u);
  EXPECT_FALSE(refl.is_normal());
  try {
    Subgroup(d, {d.identity(), d.find("(1,0)")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSubgroup);
  }
}

TEST(CheckAction, TrivialGroupIsValid) {
  EXPECT_TRUE(check_action(trivial_on(cycle(3))).valid());
}

TEST(CheckAction, DihedralOnSixCycleIsValid) {
  for (std::int64_t m : {3, 5, 9}) EXPECT_TRUE(check_action(dihedral_on_cycle(m)).valid()) << m;
}

TEST(CheckAction, DetectsEdgeInversion) {
  Graph g = make_graph({vertex("P", 0), vertex("Q", 0)}, {{edge("e0", 0), vertex("P", 0), vertex("Q", 0)}});
  GraphAction a{cyclic_group(2), g, {}};
  a.act.push_back(identity_morphism(g).map);
  a.act.push_back({{vertex("P", 0), vertex("Q", 0)}, {vertex("Q", 0), vertex("P", 0)}, {edge("e0", 0), edge("e0", 0)}});
  auto rep = check_action(a);
  ASSERT_FALSE(rep.valid());
  bool inversion = false;
  for (const auto& v : rep.violations) inversion |= v.find("inverts") != std::string::npos;
  EXPECT_TRUE(inversion);
}

TEST(CheckAction, DetectsIncompatibility) {
  GraphAction a = dihedral_on_cycle(3);
  std::swap(a.act[2], a.act[4]);  // (1,0) and (2,0) exchanged
  EXPECT_FALSE(check_action(a).valid());
}

TEST(QuotientGraph, TrivialSubgroupIsBijective) {
  GraphAction a = dihedral_on_cycle(3);
  auto [q, proj] = quotient_graph(a, Subgroup(a.group, {a.group.identity()}));
  EXPECT_EQ(q, a.graph);
  auto rep = check_morphism(proj);
  EXPECT_TRUE(rep.is_morphism && rep.is_surjective);
}

TEST(QuotientGraph, FullGroupGivesSegment) {
  GraphAction a = dihedral_on_cycle(3);
  auto [q, proj] = quotient_graph(a, Subgroup::whole(a.group));
  EXPECT_EQ(q, make_graph({vertex("P", 0), vertex("Q", 0)}, {{edge("e0", 0), vertex("P", 0), vertex("Q", 0)}}));
  auto rep = check_morphism(proj);
  EXPECT_TRUE(rep.is_morphism && rep.is_surjective);
}

TEST(QuotientGraph, FibersAreOrbits) {
  for (std::int64_t m : {3, 9}) {
    GraphAction a = dihedral_on_cycle(m);
    for (const std::string& gen : {std::string("(0,1)"), std::string("(1,0)"), std::string("(3,0)")}) {
      if (gen == "(3,0)" && m == 3) continue;
      Subgroup h = Subgroup::generated_by(a.group, {a.group.find(gen)});
      auto [q, proj] = quotient_graph(a, h);
      for (const auto& x : a.graph.cells()) {
        for (const auto& y : a.graph.cells()) {
          bool related = false;
          for (Element g : h.members()) related |= a.apply(g, x) == y;
          EXPECT_EQ(proj(x) == proj(y), related);
        }
      }
    }
  }
}

TEST(QuotientGraph, PartialTranslationsOnLineBallGiveCycle) {
  // Line ball of radius 3 under translations by multiples of 3.
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  const std::int64_t r = 3;
  for (std::int64_t x = -r; x <= r; ++x) vs.push_back(vertex("P", x));
  for (std::int64_t x = -r; x < r; ++x) vs.push_back(vertex("Q", x));
  for (std::int64_t x = -r; x < r; ++x) es.push_back({edge("e0", x), vertex("P", x), vertex("Q", x)});
  for (std::int64_t x = -r + 1; x <= r; ++x) es.push_back({edge("e1", x), vertex("P", x), vertex("Q", x - 1)});
  Graph ball = make_graph(vs, es);
  ActionMaps maps;
  for (std::int64_t k = -2; k <= 2; ++k) {
    CellMap m;
    for (const auto& c : ball.cells()) {
      CellId img{c.kind, c.tag, c.index + 3 * k};
      if (ball.contains(img)) m.emplace(c, img);
    }
    maps.push_back(std::move(m));
  }
  auto q = orbit_quotient(ball, maps);
  EXPECT_EQ(q.quotient.num_vertices(), 6u);
  EXPECT_EQ(q.quotient.num_edges(), 6u);
  EXPECT_FALSE(is_tree(q.quotient));
  EXPECT_TRUE(is_isomorphic(q.quotient, cycle(3)));

  Graph t = fundamental_domain_of(ball, maps, vertex("P", 0));
  EXPECT_THROW(fundamental_domain_of(ball, maps), Error);  // boundary root cannot lift
  EXPECT_TRUE(is_tree(t));
  EXPECT_EQ(t.num_edges(), 5u);
}

TEST(FundamentalDomain, UnitTranslationGivesOneEdge) {
  // Translation by 1 identifies every P_x and every Q_x: the quotient is a
  // 2-cycle and a lift of its spanning tree is one edge.
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  const std::int64_t r = 4;
  for (std::int64_t x = -r; x <= r; ++x) vs.push_back(vertex("P", x));
  for (std::int64_t x = -r; x < r; ++x) vs.push_back(vertex("Q", x));
  for (std::int64_t x = -r; x < r; ++x) es.push_back({edge("e0", x), vertex("P", x), vertex("Q", x)});
  for (std::int64_t x = -r + 1; x <= r; ++x) es.push_back({edge("e1", x), vertex("P", x), vertex("Q", x - 1)});
  Graph ball = make_graph(vs, es);
  ActionMaps maps;
  for (std::int64_t k = -2; k <= 2; ++k) {
    CellMap m;
    for (const auto& c : ball.cells()) {
      CellId img{c.kind, c.tag, c.index + k};
      if (ball.contains(img)) m.emplace(c, img);
    }
    maps.push_back(std::move(m));
  }
  auto q = orbit_quotient(ball, maps);
  EXPECT_EQ(q.quotient.num_vertices(), 2u);
  EXPECT_EQ(q.quotient.num_edges(), 2u);
  Graph t = fundamental_domain_of(ball, maps, vertex("P", 0));
  EXPECT_EQ(t.num_vertices(), 2u);
  EXPECT_EQ(t.num_edges(), 1u);
  EXPECT_TRUE(t.contains(vertex("P", 0)));
}

TEST(Stabilizer, Examples) {
  GraphAction triv = trivial_on(cycle(3));
  EXPECT_EQ(stabilizer(triv, vertex("P", 0)).order(), 1u);
  GraphAction a = dihedral_on_cycle(3);
  Subgroup sp = stabilizer(a, vertex("P", 0));
  EXPECT_EQ(sp.members(), (std::set<Element>{a.group.find("(0,0)"), a.group.find("(0,1)")}));
  EXPECT_EQ(stabilizer(a, edge("e0", 0)).order(), 1u);
  EXPECT_THROW(stabilizer(a, vertex("R", 0)), Error);
}

TEST(Stabilizer, OrbitStabilizerCounts) {
  for (std::int64_t m : {3, 5, 9}) {
    GraphAction a = dihedral_on_cycle(m);
    for (const auto& c : a.graph.cells()) {
      EXPECT_EQ(orbit(a, c).size() * stabilizer(a, c).order(), a.group.order());
    }
  }
}

TEST(FundamentalDomain, TrivialGroupGivesSpanningTree) {
  Graph c = cycle(3);
  Graph t = fundamental_domain(trivial_on(c));
  EXPECT_TRUE(is_tree(t));
  EXPECT_EQ(t.vertices(), c.vertices());
}

TEST(FundamentalDomain, DihedralGivesBaseSegment) {
  Graph t = fundamental_domain(dihedral_on_cycle(3));
  EXPECT_EQ(t, make_graph({vertex("P", 0), vertex("Q", 0)}, {{edge("e0", 0), vertex("P", 0), vertex("Q", 0)}}));
}

TEST(FundamentalDomain, ProjectionIsInjectiveOntoSpanningTree) {
  for (std::int64_t m : {3, 9}) {
    GraphAction a = dihedral_on_cycle(m);
    for (const std::string& gen : {std::string("(0,1)"), std::string("(1,0)")}) {
      Subgroup h = Subgroup::generated_by(a.group, {a.group.find(gen)});
      auto maps = subgroup_maps(a, h);
      auto q = orbit_quotient(a.graph, maps);
      Graph t = fundamental_domain_of(a.graph, maps);
      std::set<CellId> images;
      for (const auto& c : t.cells()) images.insert(q.projection(c));
      EXPECT_EQ(images.size(), t.num_cells());
      EXPECT_EQ(t.num_vertices(), q.quotient.num_vertices());
      EXPECT_TRUE(is_tree(t));
    }
  }
}

TEST(SegmentDecomposition, Examples) {
  Graph seg = make_graph({vertex("P", 0), vertex("Q", 0)}, {{edge("e0", 0), vertex("P", 0), vertex("Q", 0)}});
  auto [a0, b0, c0] = segment_decomposition(trivial_on(seg), seg);
  EXPECT_EQ(a0.order() + b0.order() + c0.order(), 3u);

  GraphAction a = dihedral_on_cycle(9);
  auto [sp, sq, se] = segment_decomposition(a, fundamental_domain(a));
  EXPECT_EQ(sp.order(), 2u);
  EXPECT_EQ(sq.order(), 2u);
  EXPECT_EQ(se.order(), 1u);
  for (Element g : se.members()) EXPECT_TRUE(sp.contains(g) && sq.contains(g));
  EXPECT_THROW(segment_decomposition(a, cycle(9)), Error);
}

TEST(QuotientAction, NormalSubgroupActsEquivariantly) {
  GraphAction a = dihedral_on_cycle(9);
  Subgroup h = Subgroup::generated_by(a.group, {a.group.find("(3,0)")});
  ASSERT_TRUE(h.is_normal());
  auto [qa, qg] = quotient_action(a, h);
  EXPECT_EQ(qa.group.order(), 6u);
  EXPECT_TRUE(check_action(qa).valid());
  auto [qgraph, proj] = quotient_graph(a, h);
  for (Element g = 0; g < a.group.order(); ++g) {
    for (const auto& c : a.graph.cells()) {
      EXPECT_EQ(proj(a.apply(g, c)), qa.apply(qg.projection[g], proj(c)));
    }
  }
}

}  // namespace
}  // namespace prograph
