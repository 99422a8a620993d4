#include <gtest/gtest.h>

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "prograph/dihedral.hpp"

namespace prograph {
namespace {

using dihedral::E;
using dihedral::Level;
using dihedral::P;
using dihedral::Q;

std::int64_t pw(std::int64_t p, int n) {
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) r *= p;
  return r;
}

std::int64_t md(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Section tables for p >= 3 transcribed clause by clause: x in
// {0..[p^n/2]} fixed, p^n - x sent to p^m - x.
CellMap paper_section(std::int64_t p, int n, int m) {
  const std::int64_t pn = pw(p, n), pm = pw(p, m), h = pn / 2;
  CellMap s;
  auto put = [&](const CellId& from, const CellId& to) {
    s[CellId{from.kind, from.tag, md(from.index, pn)}] = CellId{to.kind, to.tag, md(to.index, pm)};
  };
  for (std::int64_t x = 0; x <= h; ++x) {
    put(P(x), P(x));
    put(Q(x), Q(x));
    put(P(pn - x), P(pm - x));
    put(Q(pn - x), Q(pm - x));
    put(E(0, x), E(0, x));  // [P_x - Q_x]
    put(E(1, x), E(1, x));  // [P_x - Q_{x-1}]
  }
  for (std::int64_t x = 1; x <= h; ++x) {
    put(E(0, pn - x), E(0, pm - x));
    put(E(1, pn - x), E(1, pm - x));
  }
  return s;
}

// p = 2: x in {0..2^{n-1}} fixed, the rest sent to 2^m - (2^n - x).
CellMap upper_half_section(int n, int m) {
  const std::int64_t pn = pw(2, n), pm = pw(2, m);
  CellMap s;
  for (const auto& c : dihedral::level_graph({2, n}).cells()) {
    const std::int64_t x = c.index;
    s[c] = CellId{c.kind, c.tag, x <= pn / 2 ? x : pm - (pn - x)};
  }
  return s;
}

TEST(LineBall, RadiusZero) {
  Graph g = dihedral::line_ball(0);
  EXPECT_EQ(g.num_vertices(), 1u);
  EXPECT_TRUE(g.contains(P(0)));
}

TEST(LineBall, EndpointRule) {
  Graph g = dihedral::line_ball(3);
  EXPECT_EQ(g.origin(E(0, 0)), P(0));
  EXPECT_EQ(g.terminus(E(0, 0)), Q(0));
  EXPECT_EQ(g.origin(E(1, 0)), P(0));
  EXPECT_EQ(g.terminus(E(1, 0)), Q(-1));
  EXPECT_TRUE(is_tree(g));
  EXPECT_EQ(g.num_vertices(), 13u);
}

TEST(LineBall, LineActionIsAGroupAction) {
  Graph g = dihedral::line_ball(6);
  Graph small = dihedral::line_ball(2);
  for (std::int64_t a = -2; a <= 2; ++a) {
    for (int s = 0; s < 2; ++s) {
      const DinftyElement x{a, s};
      for (std::int64_t b = -2; b <= 2; ++b) {
        for (int t = 0; t < 2; ++t) {
          const DinftyElement y{b, t};
          for (const auto& c : small.cells()) {
            EXPECT_EQ(dihedral::line_action(x * y, c), dihedral::line_action(x, dihedral::line_action(y, c)));
          }
        }
      }
      for (const auto& [e, ends] : small.edges()) {
        const CellId img = dihedral::line_action(x, e);
        EXPECT_EQ(g.origin(img), dihedral::line_action(x, ends.first));
        EXPECT_EQ(g.terminus(img), dihedral::line_action(x, ends.second));
      }
    }
  }
}

TEST(LevelGraph, CountsAndCycle) {
  Graph g = dihedral::level_graph({3, 1});
  EXPECT_EQ(g.num_vertices(), 6u);
  EXPECT_EQ(g.num_edges(), 6u);
  EXPECT_TRUE(find_cycle(g).has_value());
  EXPECT_EQ(count_components(g), 1u);
  Graph g2 = dihedral::level_graph({2, 2});
  EXPECT_EQ(g2.num_vertices(), 8u);
  EXPECT_EQ(g2.num_edges(), 8u);
  for (std::int64_t p : {2, 3, 5}) {
    for (int n = 1; n <= 2; ++n) EXPECT_FALSE(is_tree(dihedral::level_graph({p, n})));
  }
}

TEST(LevelGraph, IsQuotientOfLineBall) {
  for (std::int64_t p : {2, 3, 5}) {
    for (int n = 1; n <= 2; ++n) {
      const std::int64_t m = pw(p, n);
      Graph ball = dihedral::line_ball(m + 2);
      ActionMaps maps;
      for (std::int64_t k = -3; k <= 3; ++k) {
        CellMap t;
        for (const auto& c : ball.cells()) {
          CellId img{c.kind, c.tag, c.index + k * m};
          if (ball.contains(img)) t.emplace(c, img);
        }
        maps.push_back(std::move(t));
      }
      auto q = orbit_quotient(ball, maps);
      EXPECT_TRUE(is_isomorphic(q.quotient, dihedral::level_graph({p, n}))) << p << "^" << n;
    }
  }
}

TEST(LevelGraph, InvalidSpec) {
  EXPECT_THROW(dihedral::level_graph({4, 1}), Error);
  EXPECT_THROW(dihedral::level_graph({3, 0}), Error);
}

TEST(ThetaMn, IdentityAndReduction) {
  auto id = dihedral::theta_mn({3, 2}, {3, 2});
  EXPECT_EQ(id.map, identity_morphism(id.source).map);
  auto f = dihedral::theta_mn({3, 2}, {3, 1});
  EXPECT_EQ(f(P(4)), P(1));
  auto rep = check_morphism(f);
  EXPECT_TRUE(rep.is_morphism && rep.is_surjective);
  try {
    dihedral::theta_mn({3, 2}, {2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PrimeMismatch);
  }
}

TEST(ThetaMn, CompositionCoherence) {
  for (std::int64_t p : {2, 3}) {
    auto direct = dihedral::theta_mn({p, 3}, {p, 1});
    auto composed = compose(dihedral::theta_mn({p, 2}, {p, 1}), dihedral::theta_mn({p, 3}, {p, 2}));
    EXPECT_EQ(direct.map, composed.map);
    EXPECT_TRUE(validate_prograph(dihedral::tower(p, 3)).valid());
  }
}

TEST(ActionTable, ValidAndMatchesLineQuotient) {
  for (std::int64_t p : {2, 3, 5}) {
    for (int n = 1; n <= 2; ++n) {
      const std::int64_t m = pw(p, n);
      GraphAction a = dihedral::action_table({p, n});
      EXPECT_TRUE(check_action(a).valid());
      for (Element g = 0; g < a.group.order(); ++g) {
        // Lift g and each cell to the line, act there, reduce.
        const DinftyElement lift{static_cast<std::int64_t>(g / 2), static_cast<int>(g % 2)};
        for (const auto& c : a.graph.cells()) {
          CellId img = dihedral::line_action(lift, c);
          EXPECT_EQ(a.apply(g, c), (CellId{img.kind, img.tag, md(img.index, m)}));
        }
      }
    }
  }
}

TEST(ActionTable, Examples) {
  GraphAction a = dihedral::action_table({3, 1});
  const Element e = a.group.find("(0,0)");
  for (const auto& c : a.graph.cells()) EXPECT_EQ(a.apply(e, c), c);
  EXPECT_EQ(stabilizer(a, P(0)).order(), 2u);
  EXPECT_EQ(fundamental_domain(a), subgraph_of_cells(a.graph, dihedral::base_segment()));
}

TEST(DisplayedFormula, QuotedExamples) {
  const Level l{3, 1};
  GroupTable d = dihedral::level_group(l);
  // ā = 2 = 2·1, so [P_0 - Q_0] goes to [P_1 - Q_1].
  EXPECT_EQ(dihedral::displayed_formula_action(l, d.find("(2,0)"), E(0, 0)), E(0, 1));
  // ā = 1 = 2·0+1, so [P_0 - Q_0] goes to [P_1 - Q_0].
  EXPECT_EQ(dihedral::displayed_formula_action(l, d.find("(1,0)"), E(0, 0)), E(1, 1));
}

TEST(DisplayedFormula, DisagreesWithQuotientAction) {
  // (2,0)·[P_0 - Q_0]: the displayed case ā = 2k̄ with k = 1 gives
  // [P_1 - Q_1] = e0_1; the quotient action translates by 2.
  const Level l{3, 1};
  GraphAction a = dihedral::action_table(l);
  const Element g = a.group.find("(2,0)");
  EXPECT_EQ(a.apply(g, E(0, 0)), E(0, 2));
  std::size_t disagreements = 0;
  for (Element h = 0; h < a.group.order(); ++h) {
    for (const auto& [e, ends] : a.graph.edges()) disagreements += dihedral::displayed_formula_action(l, h, e) != a.apply(h, e);
  }
  EXPECT_GT(disagreements, 0u);
}

TEST(ExplicitSections, QuotedValues) {
  CellMap s = dihedral::s_nm_explicit({3, 1}, {3, 2});
  EXPECT_EQ(s.at(P(1)), P(1));
  EXPECT_EQ(s.at(P(2)), P(8));
  auto r = dihedral::r_nm_explicit(3, 1, 2);
  GroupTable d3 = dihedral_group(3), d9 = dihedral_group(9);
  EXPECT_EQ(r.at(d3.find("(0,0)")), d9.find("(0,0)"));
  EXPECT_EQ(r.at(d3.find("(1,1)")), d9.find("(1,1)"));
  EXPECT_EQ(r.at(d3.find("(2,0)")), d9.find("(8,0)"));
}

TEST(ExplicitSections, MatchTranscribedTables) {
  for (std::int64_t p : {3, 5}) {
    for (int n = 1; n <= 2; ++n) {
      for (int m = n + 1; m <= 3; ++m) {
        EXPECT_EQ(dihedral::s_nm_explicit({p, n}, {p, m}), paper_section(p, n, m)) << p << " " << n << " " << m;
      }
    }
  }
  for (int n = 1; n <= 3; ++n) {
    for (int m = n + 1; m <= 4; ++m) {
      CellMap expected = upper_half_section(n, m);
      EXPECT_EQ(dihedral::s_nm_explicit({2, n}, {2, m}), expected);
    }
  }
}

TEST(ExplicitSections, SectionLawsExhaustive) {
  for (std::int64_t p : {2, 3}) {
    for (int n = 1; n <= 2; ++n) {
      for (int m = n + 1; m <= 3; ++m) {
        CellMap s = dihedral::s_nm_explicit({p, n}, {p, m});
        auto theta = dihedral::theta_mn({p, m}, {p, n});
        std::set<CellId> image;
        for (const auto& [c, lift] : s) {
          EXPECT_EQ(theta(lift), c);
          image.insert(lift);
        }
        EXPECT_EQ(image.size(), s.size());
        std::set<CellId> t;
        for (const auto& c : dihedral::base_segment()) t.insert(s.at(c));
        EXPECT_EQ(t, dihedral::base_segment());
        auto r = dihedral::r_nm_explicit(p, n, m);
        for (Element g = 0; g < r.size(); ++g) {
          EXPECT_EQ(dinfty_project(dihedral_element(r[g]), p, static_cast<unsigned>(n)), g);
        }
      }
    }
  }
}

TEST(ExplicitSections, ComposeAcrossLevels) {
  for (std::int64_t p : {2, 3}) {
    auto s = dihedral::sections(p, 4);
    for (int n = 1; n <= 4; ++n) {
      for (int m = n; m <= 4; ++m) {
        for (const auto& c : dihedral::level_graph({p, n}).cells()) {
          EXPECT_EQ(s.lift(n, m, c), m == n ? c : dihedral::s_nm_explicit({p, n}, {p, m}).at(c));
        }
      }
    }
  }
}

TEST(I0Rule, Examples) {
  EXPECT_EQ(dihedral::i0_rule(3, 1, E(0, 0)), 1);
  // Wrap edge [Q_1, P_2] at p = 3, i = 1.
  EXPECT_EQ(dihedral::wrap_edge(3, 1), E(1, 2));
  EXPECT_EQ(dihedral::i0_rule(3, 1, E(1, 2)), 2);
  EXPECT_EQ(dihedral::i0_rule(2, 2, dihedral::wrap_edge(2, 2)), 3);
  EXPECT_EQ(dihedral::i0_rule(2, 1, E(1, 0)), 2);  // [P_0, Q_1]
  EXPECT_THROW(dihedral::i0_rule(3, 1, E(0, 7)), Error);
}

TEST(Bundle, AssembledDihedralBundleIsValid) {
  for (std::int64_t p : {2, 3}) {
    auto b = dihedral::bundle(p, 3);
    EXPECT_TRUE(validate_bundle(b).valid());
  }
}

}  // namespace
}  // namespace prograph
