// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Every comparison is exact; the only tolerance is the
// wall-clock budget per criterion.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prograph/dihedral.hpp"
#include "prograph/puiseux.hpp"

namespace {

using namespace prograph;
using dihedral::E;
using dihedral::P;
using dihedral::Q;

constexpr std::size_t kMismatchTolerance = 0;  // exact equality everywhere
constexpr double kBudgetSeconds = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Detail {
  std::ostringstream os;
  bool pass = true;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      os << what << "; ";
    }
  }
  Outcome done(const std::string& summary) { return {pass, summary + (pass ? "" : " | " + os.str())}; }
};

std::int64_t pw(std::int64_t p, int n) { return ipow(p, static_cast<unsigned>(n)); }

// 1. Γ/U_n from orbits of translations by multiples of p^n on a line ball.
Outcome quotient_tower() {
  Detail d;
  for (std::int64_t p : {2, 3, 5}) {
    for (int n = 1; n <= 2; ++n) {
      const std::int64_t m = pw(p, n);
      const Graph ball = dihedral::line_ball(m + 2);
      ActionMaps maps;
      for (std::int64_t k = -3; k <= 3; ++k) {
        CellMap t;
        for (const auto& c : ball.cells()) {
          const CellId img{c.kind, c.tag, c.index + k * m};
          if (ball.contains(img)) t.emplace(c, img);
        }
        maps.push_back(std::move(t));
      }
      const Graph q = orbit_quotient(ball, maps).quotient;
      bool cycle = q.num_vertices() == static_cast<std::size_t>(2 * m) && q.num_edges() == q.num_vertices() &&
                   is_connected(q);
      for (const auto& v : q.vertices()) cycle = cycle && q.incident(v).size() == 2;
      const std::string at = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      d.require(cycle, at + " not a " + std::to_string(2 * m) + "-cycle");
      d.require(is_isomorphic(q, dihedral::level_graph({p, n})), at + " not isomorphic to the level graph");
    }
  }
  return d.done("6 quotients are 2p^n-cycles isomorphic to the level graphs");
}

// 2. The displayed case formulas against the action induced from the line.
Outcome action_table_fidelity() {
  std::size_t pairs = 0, mismatches = 0;
  std::string first;
  for (int n = 1; n <= 2; ++n) {
    const dihedral::Level l{3, n};
    const GraphAction a = dihedral::action_table(l);
    for (Element g = 0; g < a.group.order(); ++g) {
      for (const auto& [e, ends] : a.graph.edges()) {
        ++pairs;
        const CellId shown = dihedral::displayed_formula_action(l, g, e);
        if (shown != a.apply(g, e)) {
          if (mismatches++ == 0) {
            first = "n=" + std::to_string(n) + " " + a.group.label(g) + "." + to_string(e) + ": displayed " +
                    to_string(shown) + ", induced " + to_string(a.apply(g, e));
          }
        }
      }
    }
  }
  const bool ok = mismatches <= kMismatchTolerance;
  return {ok, std::to_string(mismatches) + "/" + std::to_string(pairs) + " (element, edge) pairs differ" +
                  (ok ? "" : "; first: " + first)};
}

// 3. θ∘s = id, φ∘r = id and s(T_n) = T_m for every n < m ≤ 3.
Outcome section_laws() {
  Detail d;
  std::size_t checked = 0;
  for (std::int64_t p : {2, 3}) {
    const int top = 3;
    const auto tw = dihedral::tower(p, top);
    const auto s = dihedral::sections(p, top);
    const auto sys = dihedral::group_system(p, top);
    const auto r = dihedral::group_sections(p, top);
    d.require(validate_sections(tw, s).valid(), "p=" + std::to_string(p) + " validate_sections");
    d.require(validate_group_sections(sys, r).valid(), "p=" + std::to_string(p) + " validate_group_sections");
    for (int n = 1; n <= top; ++n) {
      for (int m = n + 1; m <= top; ++m) {
        const auto theta = dihedral::theta_mn({p, m}, {p, n});
        for (const auto& c : tw.level(n).cells()) {
          ++checked;
          d.require(theta(s.lift(n, m, c)) == c, "theta s != id at " + to_string(c));
        }
        std::set<CellId> lifted;
        for (const auto& c : *s.trees[static_cast<std::size_t>(n - 1)]) lifted.insert(s.lift(n, m, c));
        d.require(lifted == *s.trees[static_cast<std::size_t>(m - 1)], "s(T_n) != T_m");
        for (Element g = 0; g < sys.level(n).order(); ++g) {
          ++checked;
          d.require(sys.phi(m, n, r.lift(n, m, g)) == g, "phi r != id");
        }
      }
    }
  }
  return d.done(std::to_string(checked) + " section identities hold for p in {2,3}");
}

// 4. Minimal i0 from C1 against the closed-form rule.
Outcome i0_rule() {
  Detail d;
  std::size_t entries = 0;
  for (std::int64_t p : {2, 3}) {
    const int top = 4;
    const auto rep = check_c1(dihedral::tower(p, top), dihedral::sections(p, top));
    for (const auto& e : rep.entries) {
      ++entries;
      const CellId edge_cell{CellKind::Edge, e.subject.substr(0, 2), std::stoll(e.subject.substr(3))};
      const int rule = dihedral::i0_rule(p, e.level, edge_cell);
      d.require(e.i0 && *e.i0 == rule, "p=" + std::to_string(p) + " level " + std::to_string(e.level) + " " +
                                           e.subject + " rule " + std::to_string(rule));
    }
  }
  return d.done(std::to_string(entries) + " edges match i0 = i, or i+1 on the wrap edge");
}

// 5. The truncated colimit is a path; no edge from levels ≤ N-1 is
// undetermined under C1.  The single edge closing the level cycle, whose
// endpoint first appears beyond the horizon, is reported alongside.
Outcome sylvestre() {
  Detail d;
  std::string info;
  for (std::int64_t p : {2, 3}) {
    const int top = 4;
    const auto tw = dihedral::tower(p, top);
    const auto s = dihedral::sections(p, top);
    const auto rep = is_sylvestre_truncated(tw, s, 1);
    const Graph& g = rep.colimit.graph;
    std::size_t leaves = 0;
    bool path = rep.is_tree;
    for (const auto& v : g.vertices()) {
      leaves += g.incident(v).size() == 1;
      path = path && g.incident(v).size() <= 2;
    }
    path = path && leaves == 2;
    std::size_t undetermined = 0;
    for (const auto& e : check_c1(tw, s).entries) undetermined += e.level <= top - 1 && e.status == Status::Undetermined;
    const std::string at = "p=" + std::to_string(p);
    d.require(path, at + " colimit is not a path");
    d.require(undetermined == 0, at + " " + std::to_string(undetermined) + " undetermined edges");
    info += at + ": " + std::to_string(g.num_vertices()) + " vertices, " + std::to_string(rep.excluded_edges) +
            " edge beyond horizon; ";
  }
  return d.done("paths with zero undetermined edges (" + info.substr(0, info.size() - 2) + ")");
}

// 6. Builder output against the explicit sections, cell by cell.
Outcome builder_agreement() {
  Detail d;
  const std::int64_t p = 3;
  const int top = 3;
  const auto h = dihedral::enumerated(p);
  const auto act = dihedral::line_tree_action(40);
  const auto f = dihedral::filtration(p, top);
  const auto g = build_graph_sections(h, act, f, top);
  auto builder_cell = [&](int n, const CellId& line) {
    for (std::size_t k = 0; k < 4000; ++k) {
      const DinftyElement x = dinfty_at(k);
      for (const auto& a : act.tree) {
        if (dihedral::line_action(x, a) == line) return g.levels.at(n).cell(a, f.project(x, n));
      }
    }
    return line;
  };
  std::size_t cells = 0;
  for (int n = 1; n < top; ++n) {
    for (const auto& [c, lift] : dihedral::s_nm_explicit({p, n}, {p, n + 1})) {
      ++cells;
      const CellId line{c.kind, c.tag, dihedral::centered(p, n, c.index)};
      const CellId lifted{lift.kind, lift.tag, dihedral::centered(p, n + 1, lift.index)};
      d.require(g.s.lift(n, n + 1, builder_cell(n, line)) == builder_cell(n + 1, lifted), "s differs at " + to_string(c));
    }
  }
  const auto r = build_group_sections(h, f, top);
  std::size_t elements = 0;
  for (int n = 1; n < top; ++n) {
    const auto& got = r.r.steps[static_cast<std::size_t>(n - 1)];
    const auto want = dihedral::r_nm_explicit(p, n, n + 1);
    elements += want.size();
    d.require(got == want, "r differs at level " + std::to_string(n));
  }
  return d.done(std::to_string(cells) + " graph cells and " + std::to_string(elements) +
                " group elements agree; ledger n = 1,2,3");
}

// 7. Equivariance, C3 and C4 on the dihedral bundle, N = 3.
Outcome dfaf_checks() {
  Detail d;
  const auto b = dihedral::bundle(3, 3);
  const auto eq = check_equivariance(b);
  const auto c3 = check_c3(b);
  const auto c4 = check_c4(b);
  d.require(eq.valid(), std::to_string(eq.violations.size()) + " equivariance violations");
  d.require(c3.count(Status::Undetermined) == 0, std::to_string(c3.count(Status::Undetermined)) + " C3 undetermined");
  std::string which;
  for (const auto& e : c4.entries) {
    if (e.status == Status::Undetermined) which += " [level " + std::to_string(e.level) + " " + e.subject + "]";
  }
  d.require(c4.count(Status::Undetermined) == 0,
            std::to_string(c4.count(Status::Undetermined)) + "/" + std::to_string(c4.entries.size()) +
                " C4 undetermined:" + which);
  return d.done("equivariance " + std::to_string(eq.violations.size()) + " violations, C3 " +
                std::to_string(c3.entries.size()) + " entries, C4 " + std::to_string(c4.entries.size()) + " entries");
}

// 8. Stabilizers of the fundamental segment under the induced action.
Outcome segment_decomposition_orders() {
  const auto b = dihedral::bundle(3, 3);
  std::vector<GroupClass> classes;
  for (std::int64_t a = -4; a <= 4; ++a) {
    for (int f = 0; f < 2; ++f) classes.push_back(dihedral::group_class(3, 3, {a, f}));
  }
  const auto ia = induced_colimit_action(b, classes, 1);
  std::vector<std::size_t> orders;
  for (const auto& c : {P(0), Q(0), E(0, 0)}) {
    const CellId l = ia.colimit.label_of.at({1, c});
    std::size_t k = 0;
    for (const auto& m : ia.maps) {
      auto it = m.find(l);
      k += it != m.end() && it->second == l;
    }
    orders.push_back(k);
  }
  const bool ok = orders == std::vector<std::size_t>{2, 2, 1} && ia.inconsistencies.empty();
  return {ok, "stabilizer orders (" + std::to_string(orders[0]) + ", " + std::to_string(orders[1]) + ", " +
                  std::to_string(orders[2]) + "), " + std::to_string(ia.inconsistencies.size()) + " inconsistencies"};
}

// 9. Z/4 *_{Z/2} Z/6: tree, degrees 2 and 3, stabilizers (4, 6, 2).
Outcome amalgam_ball() {
  Detail d;
  const auto pres = modular_amalgam();
  const auto ball = bass_serre_ball(pres, 2);
  const Graph& g = ball.graph();
  d.require(is_tree(g), "ball is not a tree");
  for (const auto& v : g.vertices()) {
    if (ball.sequence_of(v).size() + 1 > ball.radius()) continue;  // boundary
    d.require(g.incident(v).size() == (v.tag == "G1" ? 2u : 3u), "degree at " + to_string(v));
  }
  const auto maps = ball.action_maps(pres.enumerate(2));
  const Graph t = fundamental_domain_of(g, maps, *ball.cell_of(pres.identity(), 0));
  auto [sp, sq, se] = segment_decomposition_of(maps, t);
  d.require(sp.size() == 4 && sq.size() == 6 && se.size() == 2, "segment stabilizers");
  return d.done("tree on " + std::to_string(g.num_vertices()) + " vertices, degrees (2, 3), orders (" +
                std::to_string(sp.size()) + ", " + std::to_string(sq.size()) + ", " + std::to_string(se.size()) + ")");
}

// 10. Galois graphs equivariantly isomorphic to the level graphs.
Outcome galois_equivalence() {
  Detail d;
  std::size_t isos = 0, squares = 0;
  for (std::int64_t p : {2, 3, 5}) {
    for (int n = 1; n <= 3; ++n) {
      const std::string at = "p=" + std::to_string(p) + " n=" + std::to_string(n);
      try {
        d.require(puiseux::iso_to_dihedral(p, n).equivariance.valid(), at + " not equivariant");
        ++isos;
        if (n >= 2) {
          d.require(puiseux::theta_square(p, n).valid(), at + " theta square open");
          ++squares;
        }
      } catch (const Error& e) {
        d.require(false, at + " " + e.what());
      }
    }
  }
  return d.done(std::to_string(isos) + " equivariant isomorphisms, " + std::to_string(squares) +
                " theta squares closed");
}

// 11. ω on the prefix |x| ≤ ⌊p^N/2⌋.
Outcome omega() {
  const std::int64_t p = 3;
  const int top = 3;
  const std::int64_t half = pw(p, top) / 2;
  const auto h = dihedral::enumerated(p);
  // The spiral lists (a, 0), (a, 1) for a = 0, 1, -1, 2, -2, ...
  const std::size_t k = static_cast<std::size_t>(2 * (2 * half + 1));
  std::int64_t widest = 0;
  for (const auto& x : h.prefix(k)) widest = std::max(widest, x.shift < 0 ? -x.shift : x.shift);
  const auto rep = omega_check(h, dihedral::group_system(p, top), dihedral::group_sections(p, top), k);
  const bool ok = rep.ok() && widest == half;
  return {ok, std::to_string(rep.entries.size()) + " elements, injective " + (rep.injective ? "yes" : "no") + ", " +
                  std::to_string(rep.mismatches.size()) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"quotient tower identity", quotient_tower},
      {"action-table fidelity", action_table_fidelity},
      {"section laws", section_laws},
      {"i0 rule reproduction", i0_rule},
      {"colimit is a tree at truncation", sylvestre},
      {"builder agrees with explicit sections", builder_agreement},
      {"equivariance, C3 and C4", dfaf_checks},
      {"segment decomposition (2, 2, 1)", segment_decomposition_orders},
      {"amalgam ball", amalgam_ball},
      {"Galois equivalence", galois_equivalence},
      {"omega reconstruction", omega},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > kBudgetSeconds) {
      o.pass = false;
      o.detail += " | over the time budget";
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
