#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "prograph/graph.hpp"
#include "prograph/group.hpp"
#include "prograph/union_find.hpp"

namespace prograph {

/// A finite list of (possibly partial) cell maps, one per group element in a
/// fixed order.  Finite groups give total maps; a truncated infinite group
/// acting on a ball gives partial ones (a missing key means the image leaves
/// the ball).
using ActionMaps = std::vector<CellMap>;

struct GraphAction {
  GroupTable group;
  Graph graph;
  ActionMaps act;  // act[g][c] = g . c

  const CellId& apply(Element g, const CellId& c) const {
    auto it = act.at(g).find(c);
    if (it == act[g].end()) throw Error(ErrorCode::UnknownCell, to_string(c));
    return it->second;
  }
};

struct ActionReport {
  std::vector<std::string> violations;
  bool valid() const noexcept { return violations.empty(); }
};

inline ActionReport check_action(const GraphAction& a) {
  ActionReport rep;
  const auto cells = a.graph.cells();
  if (a.act.size() != a.group.order()) {
    rep.violations.push_back("action table size differs from group order");
    return rep;
  }
  for (Element g = 0; g < a.group.order(); ++g) {
    const CellMap& m = a.act[g];
    std::set<CellId> image;
    bool total = true;
    for (const auto& c : cells) {
      auto it = m.find(c);
      if (it == m.end() || !a.graph.contains(it->second) || it->second.kind != c.kind) {
        rep.violations.push_back("element " + a.group.label(g) + " is not total on " + to_string(c));
        total = false;
        continue;
      }
      image.insert(it->second);
    }
    if (!total) continue;
    if (image.size() != cells.size()) {
      rep.violations.push_back("element " + a.group.label(g) + " is not a bijection");
    }
    for (const auto& [e, ends] : a.graph.edges()) {
      const auto& [o, t] = a.graph.endpoints(m.at(e));
      if (o != m.at(ends.first) || t != m.at(ends.second)) {
        rep.violations.push_back("element " + a.group.label(g) + " breaks endpoints of " +
                                 to_string(e));
      }
      if (ends.first != ends.second && m.at(ends.first) == ends.second &&
          m.at(ends.second) == ends.first) {
        const auto& [o2, t2] = a.graph.endpoints(m.at(e));
        std::set<CellId> support{ends.first, ends.second}, support2{o2, t2};
        if (support == support2) {
          rep.violations.push_back("element " + a.group.label(g) + " inverts edge " +
                                   to_string(e));
        }
      }
    }
  }
  if (!rep.valid()) return rep;
  for (const auto& c : cells) {
    if (a.act[a.group.identity()].at(c) != c) {
      rep.violations.push_back("identity moves " + to_string(c));
    }
  }
  // A(s)∘A(h) = A(sh) for generators s and all h gives every product by
  // induction on word length.
  std::map<CellId, std::size_t> pos;
  for (const auto& c : cells) pos.emplace(c, pos.size());
  std::vector<std::vector<std::size_t>> idx(a.group.order());
  for (Element g = 0; g < a.group.order(); ++g) {
    for (const auto& c : cells) idx[g].push_back(pos.at(a.act[g].at(c)));
  }
  std::vector<Element> gens = a.group.generators();
  if (gens.empty()) gens.push_back(a.group.identity());
  for (Element g : gens) {
    for (Element h = 0; h < a.group.order(); ++h) {
      const auto& gh = idx[a.group.mul(g, h)];
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (gh[c] != idx[g][idx[h][c]]) {
          rep.violations.push_back("compatibility fails for (" + a.group.label(g) + ", " + a.group.label(h) +
                                   ") on " + to_string(cells[c]));
          break;
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Orbits and quotients over ActionMaps

struct OrbitQuotient {
  Graph quotient;
  GraphMorphism projection;
  std::map<CellId, std::vector<CellId>> fibers;  // orbit label -> members
};

/// Orbit graph: cells are orbits labelled by their minimal member.  Orbits
/// of a partial action are the classes of the relation generated by
/// c ~ g.c wherever g.c is defined.
inline OrbitQuotient orbit_quotient(const Graph& g, const ActionMaps& maps) {
  const auto cells = g.cells();
  std::map<CellId, std::size_t> idx;
  for (const auto& c : cells) idx.emplace(c, idx.size());
  DisjointSet ds(cells.size());
  for (const auto& m : maps) {
    for (const auto& [from, to] : m) {
      auto a = idx.find(from), b = idx.find(to);
      if (a != idx.end() && b != idx.end()) ds.unite(a->second, b->second);
    }
  }
  std::map<std::size_t, CellId> label;  // root -> minimal member
  for (const auto& c : cells) label.emplace(ds.find(idx.at(c)), c);  // cells are sorted
  OrbitQuotient out;
  CellMap proj;
  for (const auto& c : cells) {
    const CellId& l = label.at(ds.find(idx.at(c)));
    proj.emplace(c, l);
    out.fibers[l].push_back(c);
  }
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (const auto& [l, members] : out.fibers) {
    if (l.is_vertex()) {
      vs.push_back(l);
    } else {
      const auto& [o, t] = g.endpoints(l);
      if (proj.at(o) == proj.at(t)) {
        throw Error(ErrorCode::InvalidAction, "quotient edge " + to_string(l) + " is a loop");
      }
      es.push_back({l, proj.at(o), proj.at(t)});
    }
  }
  out.quotient = make_graph(vs, es);
  out.projection = GraphMorphism{g, out.quotient, std::move(proj)};
  return out;
}

inline ActionMaps subgroup_maps(const GraphAction& a, const Subgroup& h) {
  ActionMaps maps;
  for (Element x : h.members()) maps.push_back(a.act.at(x));
  return maps;
}

inline std::pair<Graph, GraphMorphism> quotient_graph(const GraphAction& a, const Subgroup& h) {
  if (!check_action(a).valid()) throw Error(ErrorCode::InvalidAction, "invalid action");
  for (Element x : h.members()) {
    if (x >= a.group.order()) throw Error(ErrorCode::NotSubgroup, "element out of range");
  }
  auto q = orbit_quotient(a.graph, subgroup_maps(a, h));
  return {std::move(q.quotient), std::move(q.projection)};
}

/// Positions (into `maps`) of the elements fixing c.
inline std::vector<std::size_t> stabilizer_positions(const ActionMaps& maps, const CellId& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    auto it = maps[i].find(c);
    if (it != maps[i].end() && it->second == c) out.push_back(i);
  }
  return out;
}

inline Subgroup stabilizer(const GraphAction& a, const CellId& c) {
  if (!a.graph.contains(c)) throw Error(ErrorCode::UnknownCell, to_string(c));
  std::set<Element> members;
  for (Element g = 0; g < a.group.order(); ++g) {
    if (a.apply(g, c) == c) members.insert(g);
  }
  return Subgroup(a.group, std::move(members));
}

inline std::vector<CellId> orbit(const GraphAction& a, const CellId& c) {
  std::set<CellId> out;
  for (Element g = 0; g < a.group.order(); ++g) out.insert(a.apply(g, c));
  return {out.begin(), out.end()};
}

/// Lifts a BFS spanning tree of the full quotient back into the graph.  Each
/// new quotient edge is lifted by the first element (in `maps` order) that
/// carries an orbit member's anchored endpoint onto the current lift.  The
/// BFS starts at `root_lift` (default: the minimal vertex); partial actions
/// on a ball need a central root.
inline Graph fundamental_domain_of(const Graph& g, const ActionMaps& maps,
                                   std::optional<CellId> root_lift = std::nullopt) {
  auto q = orbit_quotient(g, maps);
  if (q.quotient.num_vertices() == 0) return Graph{};
  if (!is_connected(q.quotient)) {
    throw Error(ErrorCode::NoTreeLift, "quotient graph is not connected");
  }
  const CellMap& proj = q.projection.map;
  std::map<CellId, CellId> lift;  // quotient vertex -> lifted vertex
  const CellId start = root_lift.value_or(*q.quotient.vertices().begin());
  if (!start.is_vertex() || !g.contains(start)) throw Error(ErrorCode::UnknownVertex, to_string(start));
  const CellId root = proj.at(start);
  lift.emplace(root, start);
  std::set<CellId> chosen{start};
  std::deque<CellId> queue{root};
  while (!queue.empty()) {
    CellId u = queue.front();
    queue.pop_front();
    for (const auto& [qe, w] : q.quotient.incident(u)) {
      if (lift.count(w)) continue;
      // Try the elements in order; for partial maps a non-minimal member of
      // the edge orbit may be the only one that can be moved into place.
      const CellId& target = lift.at(u);
      std::optional<std::size_t> mover;
      CellId lifted_edge, far;
      for (std::size_t i = 0; i < maps.size() && !mover; ++i) {
        for (const auto& member : q.fibers.at(qe)) {
          const auto& [o, t] = g.endpoints(member);
          const CellId& anchor = proj.at(o) == u ? o : t;
          const CellId& other = proj.at(o) == u ? t : o;
          auto it = maps[i].find(anchor);
          if (it == maps[i].end() || it->second != target) continue;
          if (!maps[i].count(member) || !maps[i].count(other)) continue;
          mover = i;
          lifted_edge = member;
          far = other;
          break;
        }
      }
      if (!mover) {
        throw Error(ErrorCode::NoTreeLift, "cannot move " + to_string(qe) + " onto the lift");
      }
      const CellMap& m = maps[*mover];
      chosen.insert(m.at(lifted_edge));
      chosen.insert(m.at(far));
      lift.emplace(w, m.at(far));
      queue.push_back(w);
    }
  }
  Graph tree = subgraph_of_cells(g, chosen);
  std::set<CellId> images;
  for (const auto& c : tree.cells()) images.insert(proj.at(c));
  if (!is_tree(tree) || images.size() != tree.num_cells()) {
    throw Error(ErrorCode::NoTreeLift, "lifted spanning tree is not a subtree");
  }
  return tree;
}

inline Graph fundamental_domain(const GraphAction& a) {
  return fundamental_domain_of(a.graph, a.act);
}

struct SegmentParts {
  CellId origin;
  CellId terminus;
  CellId edge;
};

inline SegmentParts segment_parts(const Graph& t) {
  if (t.num_vertices() != 2 || t.num_edges() != 1) {
    throw Error(ErrorCode::NotSegment, "expected two vertices and one edge");
  }
  const auto& [e, ends] = *t.edges().begin();
  return {ends.first, ends.second, e};
}

/// Stabilizers (origin, terminus, edge) of a fundamental segment, as
/// positions into `maps`.
inline std::tuple<std::vector<std::size_t>, std::vector<std::size_t>, std::vector<std::size_t>>
segment_decomposition_of(const ActionMaps& maps, const Graph& segment) {
  const auto parts = segment_parts(segment);
  return {stabilizer_positions(maps, parts.origin), stabilizer_positions(maps, parts.terminus),
          stabilizer_positions(maps, parts.edge)};
}

inline std::tuple<Subgroup, Subgroup, Subgroup> segment_decomposition(const GraphAction& a,
                                                                      const Graph& segment) {
  const auto parts = segment_parts(segment);
  return {stabilizer(a, parts.origin), stabilizer(a, parts.terminus), stabilizer(a, parts.edge)};
}

// ---------------------------------------------------------------------------
// Quotient group acting on a quotient graph

struct QuotientGroup {
  GroupTable table;
  std::vector<Element> projection;  // parent element -> coset
};

inline QuotientGroup quotient_group(const GroupTable& g, const Subgroup& h) {
  if (!h.is_normal()) throw Error(ErrorCode::NotSubgroup, "subgroup is not normal");
  std::vector<Element> coset_of(g.order(), g.order());
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset_of[x] != g.order()) continue;
    for (Element y : h.members()) coset_of[g.mul(x, y)] = reps.size();
    reps.push_back(x);
  }
  std::vector<std::string> labels;
  for (Element r : reps) labels.push_back(g.label(r));
  std::set<Element> gens;
  for (Element s : g.generators()) {
    if (coset_of[s] != coset_of[g.identity()]) gens.insert(coset_of[s]);
  }
  auto table = make_group(
      labels, [&](Element a, Element b) { return coset_of[g.mul(reps[a], reps[b])]; },
      std::vector<Element>(gens.begin(), gens.end()));
  return {std::move(table), std::move(coset_of)};
}

/// Action of G/H on H\Γ together with the element projection; the orbit
/// projection is equivariant by construction and checked by callers.
inline std::pair<GraphAction, QuotientGroup> quotient_action(const GraphAction& a,
                                                             const Subgroup& h) {
  auto [qgraph, proj] = quotient_graph(a, h);
  auto qg = quotient_group(a.group, h);
  ActionMaps maps(qg.table.order());
  for (Element x = 0; x < a.group.order(); ++x) {
    CellMap& m = maps[qg.projection[x]];
    if (!m.empty()) continue;
    for (const auto& c : qgraph.cells()) m.emplace(c, proj(a.apply(x, c)));
  }
  return {GraphAction{qg.table, std::move(qgraph), std::move(maps)}, std::move(qg)};
}

}  // namespace prograph
