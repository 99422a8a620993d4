#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prograph/action.hpp"
#include "prograph/amalgam.hpp"
#include "prograph/dfaf.hpp"
#include "prograph/graph.hpp"
#include "prograph/pro_group.hpp"
#include "prograph/prograph.hpp"
#include "prograph/section_builder.hpp"

namespace prograph::dihedral {

// Γ has vertices P_x = {(x,0),(x,1)} and Q_x = {(x,0),(x+1,1)}; the edge
// (x,g) of D_inf is e<g>_x with o = P_x, t = Q_x (g=0) or Q_{x-1} (g=1).

struct Level {
  std::int64_t p = 3;
  int n = 1;
  std::int64_t modulus() const { return ipow(p, static_cast<unsigned>(n)); }
};

inline bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

inline void require(const Level& l) {
  if (!is_prime(l.p)) throw Error(ErrorCode::InvalidInput, "p must be prime");
  if (l.n < 1) throw Error(ErrorCode::InvalidInput, "level must be at least 1");
}

inline CellId P(std::int64_t x) { return vertex("P", x); }
inline CellId Q(std::int64_t x) { return vertex("Q", x); }
inline CellId E(int g, std::int64_t x) { return edge(g == 0 ? "e0" : "e1", x); }

inline int edge_flip(const CellId& e) { return e.tag == "e1" ? 1 : 0; }

/// Path from P_{-R} to P_R; edges whose terminus would leave the ball are
/// dropped.
inline Graph line_ball(std::int64_t radius) {
  if (radius < 0) throw Error(ErrorCode::InvalidInput, "radius must be non-negative");
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (std::int64_t x = -radius; x <= radius; ++x) vs.push_back(P(x));
  for (std::int64_t x = -radius; x < radius; ++x) {
    vs.push_back(Q(x));
    es.push_back({E(0, x), P(x), Q(x)});
    es.push_back({E(1, x + 1), P(x + 1), Q(x)});
  }
  return make_graph(vs, es);
}

/// Left multiplication of D_inf on the cells of Γ.
inline CellId line_action(const DinftyElement& g, const CellId& c) {
  const std::int64_t x = c.index;
  const std::int64_t a = g.shift;
  if (c.tag == "P") return P(g.flip ? a - x : a + x);
  if (c.tag == "Q") return Q(g.flip ? a - x - 1 : a + x);
  return E(edge_flip(c) ^ g.flip, g.flip ? a - x : a + x);
}

/// 2p^n-cycle Γ_n = U_n\Γ with indices in [0, p^n).
inline Graph level_graph(const Level& l) {
  require(l);
  const std::int64_t m = l.modulus();
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (std::int64_t x = 0; x < m; ++x) {
    vs.push_back(P(x));
    vs.push_back(Q(x));
    es.push_back({E(0, x), P(x), Q(x)});
    es.push_back({E(1, x), P(x), Q(floor_mod(x - 1, m))});
  }
  return make_graph(vs, es);
}

inline CellId reduce(const CellId& c, std::int64_t modulus) {
  return CellId{c.kind, c.tag, floor_mod(c.index, modulus)};
}

/// θ_{mn}: indices reduced mod p^n.
inline GraphMorphism theta_mn(const Level& m, const Level& n) {
  if (m.p != n.p) throw Error(ErrorCode::PrimeMismatch, "levels use different primes");
  if (m.n < n.n) throw Error(ErrorCode::InvalidInput, "theta needs m >= n");
  GraphMorphism f{level_graph(m), level_graph(n), {}};
  for (const auto& c : f.source.cells()) f.map.emplace(c, reduce(c, n.modulus()));
  return f;
}

inline GroupTable level_group(const Level& l) {
  require(l);
  return dihedral_group(l.modulus());
}

/// The action of D_{p^n} on Γ_n induced from D_inf on Γ.
inline GraphAction action_table(const Level& l) {
  GraphAction a{level_group(l), level_graph(l), {}};
  const std::int64_t m = l.modulus();
  for (Element g = 0; g < a.group.order(); ++g) {
    CellMap map;
    for (const auto& c : a.graph.cells()) map.emplace(c, reduce(line_action(dihedral_element(g), c), m));
    a.act.push_back(std::move(map));
  }
  return a;
}

/// The four case formulas exactly as displayed for (ā,b)·edge, with
/// ā = 2k̄ when the residue of a in [0, p^n) is even and ā = 2k̄+1 otherwise.
/// [P_u - Q_u] is e0_u and [P_u - Q_{u-1}] is e1_u.
inline CellId displayed_formula_action(const Level& l, Element g, const CellId& e) {
  require(l);
  const std::int64_t m = l.modulus();
  const DinftyElement ge = dihedral_element(g);
  const std::int64_t a = floor_mod(ge.shift, m);
  const bool odd = a % 2 == 1;
  const std::int64_t k = odd ? (a - 1) / 2 : a / 2;
  std::int64_t pu = 0, qu = 0;
  if (edge_flip(e) == 0) {  // [P_n - Q_n]
    const std::int64_t n = e.index;
    if (ge.flip == 0) {
      pu = odd ? n + k + 1 : n + k;
      qu = n + k;
    } else {
      pu = n - k;
      qu = odd ? n - k - 1 : n - k;
    }
  } else {  // [P_{n+1} - Q_n]
    const std::int64_t n = e.index - 1;
    if (ge.flip == 0) {
      pu = n + k + 1;
      qu = odd ? n + k + 1 : n + k;
    } else {
      pu = n - k + 1;
      qu = odd ? n - k + 1 : n - k;
    }
  }
  pu = floor_mod(pu, m);
  qu = floor_mod(qu, m);
  return qu == pu ? E(0, pu) : E(1, pu);
}

// ---------------------------------------------------------------------------
// Explicit sections

/// Representative of x mod p^n in the lift range: [-(p^n-1)/2, (p^n-1)/2]
/// for odd p, [-2^{n-1}+1, 2^{n-1}] for p = 2.
inline std::int64_t centered(std::int64_t p, int n, std::int64_t x) {
  const std::int64_t m = ipow(p, static_cast<unsigned>(n));
  const std::int64_t r = floor_mod(x, m);
  const std::int64_t half = p == 2 ? m / 2 : (m - 1) / 2;
  return r <= half ? r : r - m;
}

inline bool in_lift_range(std::int64_t p, int n, std::int64_t x) {
  return centered(p, n, x) == x;
}

/// s_{nm}: every cell lifts by the centered representative of its index.
inline CellMap s_nm_explicit(const Level& n, const Level& m) {
  if (n.p != m.p) throw Error(ErrorCode::PrimeMismatch, "levels use different primes");
  if (m.n < n.n) throw Error(ErrorCode::InvalidInput, "section needs m >= n");
  CellMap s;
  for (const auto& c : level_graph(n).cells()) {
    s.emplace(c, reduce(CellId{c.kind, c.tag, centered(n.p, n.n, c.index)}, m.modulus()));
  }
  return s;
}

inline std::vector<Element> r_nm_explicit(std::int64_t p, int n, int m) {
  if (m < n) throw Error(ErrorCode::InvalidInput, "section needs m >= n");
  const std::int64_t mod_n = ipow(p, static_cast<unsigned>(n));
  std::vector<Element> r;
  for (std::int64_t x = 0; x < mod_n; ++x) {
    for (int b = 0; b < 2; ++b) {
      r.push_back(dinfty_project({centered(p, n, x), b}, p, static_cast<unsigned>(m)));
    }
  }
  return r;
}

inline std::set<CellId> base_segment() { return {P(0), Q(0), E(0, 0)}; }

/// The edge [Q_h, P_{h+1}] (h = ⌊p^i/2⌋) whose terminus leaves the lift
/// range; it is e1 at index h+1 mod p^i for every p.
inline CellId wrap_edge(std::int64_t p, int i) {
  const std::int64_t m = ipow(p, static_cast<unsigned>(i));
  return E(1, floor_mod(m / 2 + 1, m));
}

inline int i0_rule(std::int64_t p, int i, const CellId& e) {
  if (!level_graph({p, i}).edges().count(e)) throw Error(ErrorCode::UnknownEdge, to_string(e));
  return e == wrap_edge(p, i) ? i + 1 : i;
}

// ---------------------------------------------------------------------------
// Assembled tower, levels 1..depth

inline TruncatedPrograph tower(std::int64_t p, int depth) {
  std::vector<Graph> levels;
  std::vector<GraphMorphism> steps;
  for (int n = 1; n <= depth; ++n) levels.push_back(level_graph({p, n}));
  for (int n = 1; n < depth; ++n) steps.push_back(theta_mn({p, n + 1}, {p, n}));
  return TruncatedPrograph(1, std::move(levels), std::move(steps));
}

inline SectionFamily sections(std::int64_t p, int depth) {
  SectionFamily s{1, {}, {}};
  for (int n = 1; n < depth; ++n) s.steps.push_back(s_nm_explicit({p, n}, {p, n + 1}));
  for (int n = 1; n <= depth; ++n) s.trees.push_back(base_segment());
  return s;
}

inline GroupSystem group_system(std::int64_t p, int depth) {
  std::vector<GroupTable> levels;
  std::vector<std::vector<Element>> steps;
  for (int n = 1; n <= depth; ++n) levels.push_back(level_group({p, n}));
  for (int n = 1; n < depth; ++n) {
    std::vector<Element> phi;
    for (Element g = 0; g < levels[static_cast<std::size_t>(n)].order(); ++g) {
      phi.push_back(dinfty_project(dihedral_element(g), p, static_cast<unsigned>(n)));
    }
    steps.push_back(std::move(phi));
  }
  return GroupSystem(1, std::move(levels), std::move(steps));
}

inline GroupSectionFamily group_sections(std::int64_t p, int depth) {
  GroupSectionFamily r{1, {}};
  for (int n = 1; n < depth; ++n) r.steps.push_back(r_nm_explicit(p, n, n + 1));
  return r;
}

inline ProActionBundle bundle(std::int64_t p, int depth) {
  ProActionBundle b{tower(p, depth), group_system(p, depth), {}, sections(p, depth), group_sections(p, depth)};
  for (int n = 1; n <= depth; ++n) b.actions.push_back(action_table({p, n}));
  return b;
}

/// D_inf enumerated in the fixed spiral order, projected to D_{p^n}.
inline EnumeratedGroup<DinftyElement> enumerated(std::int64_t p) {
  return {
      [](std::size_t k) { return dinfty_at(k); },
      [](const DinftyElement& a, const DinftyElement& b) { return a * b; },
      [p](const DinftyElement& x, int n) { return dinfty_project(x, p, static_cast<unsigned>(n)); },
      [](const DinftyElement& x) { return to_string(x); },
  };
}

/// D_inf onto D_{p^n} by reduction of the shift, levels 1..depth.
inline Filtration<DinftyElement> filtration(std::int64_t p, int depth) {
  return {group_system(p, depth),
          [p](const DinftyElement& x, int n) { return dinfty_project(x, p, static_cast<unsigned>(n)); }};
}

/// D_inf on the line ball of the given radius, with the base segment as T.
inline TreeAction<DinftyElement> line_tree_action(std::int64_t radius) {
  auto ball = std::make_shared<Graph>(line_ball(radius));
  return {*ball, base_segment(), [ball](const DinftyElement& g, const CellId& c) -> std::optional<CellId> {
            const CellId img = line_action(g, c);
            if (!ball->contains(img)) return std::nullopt;
            return img;
          }};
}

/// Class of g in the colimit of the group sections: its projection at the
/// first level whose lift range contains the shift.
inline GroupClass group_class(std::int64_t p, int depth, const DinftyElement& g) {
  for (int n = 1; n <= depth; ++n) {
    if (in_lift_range(p, n, g.shift)) {
      return {n, dinfty_project(g, p, static_cast<unsigned>(n)), to_string(g)};
    }
  }
  throw Error(ErrorCode::HorizonTooLarge, to_string(g) + " is beyond depth " + std::to_string(depth));
}

/// Line cell represented by a colimit class (via the centered lift).
inline CellId line_cell(std::int64_t p, const ColimitClass& cls) {
  return CellId{cls.cell.kind, cls.cell.tag, centered(p, cls.level, cls.cell.index)};
}

}  // namespace prograph::dihedral
