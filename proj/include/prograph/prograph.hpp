#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prograph/coherence.hpp"
#include "prograph/graph.hpp"
#include "prograph/union_find.hpp"

namespace prograph {

/// Levels first..top of graphs with step maps θ_{n+1,n}; step(j) maps level
/// first+j+1 onto level first+j.
class TruncatedPrograph {
 public:
  TruncatedPrograph() = default;
  TruncatedPrograph(int first_level, std::vector<Graph> levels, std::vector<GraphMorphism> steps)
      : first_(first_level), levels_(std::move(levels)), steps_(std::move(steps)) {
    if (levels_.empty()) throw Error(ErrorCode::InvalidInput, "prograph needs a level");
    if (steps_.size() + 1 != levels_.size()) {
      throw Error(ErrorCode::InvalidInput, "one step map per adjacent level pair");
    }
  }

  int first() const noexcept { return first_; }
  int top() const noexcept { return first_ + static_cast<int>(levels_.size()) - 1; }
  const Graph& level(int n) const { return levels_.at(index(n)); }
  const GraphMorphism& step(int n) const { return steps_.at(index(n)); }  // θ_{n+1,n}
  const std::vector<Graph>& levels() const noexcept { return levels_; }
  const std::vector<GraphMorphism>& steps() const noexcept { return steps_; }

  /// θ_{mn}(c) for m >= n.
  CellId theta(int m, int n, CellId c) const {
    for (int l = m; l > n; --l) c = step(l - 1)(c);
    return c;
  }

  GraphMorphism theta_morphism(int m, int n) const {
    GraphMorphism f{level(m), level(n), {}};
    for (const auto& c : level(m).cells()) f.map.emplace(c, theta(m, n, c));
    return f;
  }

 private:
  std::size_t index(int n) const {
    if (n < first_ || n > top()) throw Error(ErrorCode::InvalidInput, "level out of range");
    return static_cast<std::size_t>(n - first_);
  }

  int first_ = 0;
  std::vector<Graph> levels_;
  std::vector<GraphMorphism> steps_;
};

/// Step sections s_{n,n+1} and optional marked subtrees T_n, indexed like
/// the prograph levels.
struct SectionFamily {
  int first = 0;
  std::vector<CellMap> steps;                       // steps[j]: level first+j -> first+j+1
  std::vector<std::optional<std::set<CellId>>> trees;  // per level, may be empty

  int top() const noexcept { return first + static_cast<int>(steps.size()); }

  const CellMap& step(int n) const { return steps.at(static_cast<std::size_t>(n - first)); }

  /// s_{nm}(c) for n <= m.
  CellId lift(int n, int m, CellId c) const {
    for (int l = n; l < m; ++l) {
      const CellMap& s = step(l);
      auto it = s.find(c);
      if (it == s.end()) throw Error(ErrorCode::PartialMap, "s at level " + std::to_string(l) + ": " + to_string(c));
      c = it->second;
    }
    return c;
  }

  const std::optional<std::set<CellId>>& tree(int n) const {
    static const std::optional<std::set<CellId>> none;
    const auto i = static_cast<std::size_t>(n - first);
    return i < trees.size() ? trees[i] : none;
  }
};

inline CheckReport validate_prograph(const TruncatedPrograph& p) {
  CheckReport rep;
  for (int n = p.first(); n < p.top(); ++n) {
    const GraphMorphism& f = p.step(n);
    if (!(f.source == p.level(n + 1)) || !(f.target == p.level(n))) {
      rep.violations.push_back("step " + std::to_string(n + 1) + "->" + std::to_string(n) +
                               " has wrong source or target");
      continue;
    }
    MorphismReport m;
    try {
      m = check_morphism(f);
    } catch (const Error& e) {
      rep.violations.push_back("step " + std::to_string(n + 1) + "->" + std::to_string(n) + ": " + e.what());
      continue;
    }
    if (!m.is_morphism || !m.is_surjective) {
      for (const auto& v : m.violations) {
        rep.violations.push_back("step " + std::to_string(n + 1) + "->" + std::to_string(n) + ": " + v);
      }
    }
  }
  if (!rep.valid()) return rep;
  // Composites are morphisms and onto; θ_{kn} = θ_{mn}∘θ_{km} holds by construction.
  for (int n = p.first(); n + 2 <= p.top(); ++n) {
    auto m = check_morphism(p.theta_morphism(p.top(), n));
    if (!m.is_morphism || !m.is_surjective) {
      rep.violations.push_back("composite theta " + std::to_string(p.top()) + "->" + std::to_string(n) +
                               " is not an onto morphism");
    }
  }
  return rep;
}

inline CheckReport validate_sections(const TruncatedPrograph& p, const SectionFamily& s) {
  CheckReport rep;
  if (s.first != p.first() || s.top() != p.top()) {
    rep.violations.push_back("section levels do not match the prograph");
    return rep;
  }
  auto where = [](int n, const CellId& c) { return "level " + std::to_string(n) + " cell " + to_string(c); };
  for (int n = p.first(); n < p.top(); ++n) {
    const CellMap& step = s.step(n);
    std::set<CellId> image;
    for (const auto& c : p.level(n).cells()) {
      auto it = step.find(c);
      if (it == step.end()) {
        rep.violations.push_back(where(n, c) + ": section undefined");
        continue;
      }
      if (!p.level(n + 1).contains(it->second) || it->second.kind != c.kind) {
        rep.violations.push_back(where(n, c) + ": section leaves level " + std::to_string(n + 1));
        continue;
      }
      image.insert(it->second);
      if (p.step(n)(it->second) != c) {
        rep.violations.push_back(where(n, c) + ": theta(s(x)) = " + to_string(p.step(n)(it->second)));
      }
    }
    if (image.size() != p.level(n).num_cells()) {
      rep.violations.push_back("level " + std::to_string(n) + ": section not injective");
    }
  }
  if (!rep.valid()) return rep;
  for (int n = p.first(); n <= p.top(); ++n) {
    const auto& t = s.tree(n);
    if (!t) continue;
    for (const auto& c : *t) {
      if (!p.level(n).contains(c)) rep.violations.push_back(where(n, c) + ": tree cell not in level");
    }
    if (!rep.valid()) return rep;
    if (!is_tree(subgraph_of_cells(p.level(n), *t))) {
      rep.violations.push_back("level " + std::to_string(n) + ": marked cells are not a tree");
    }
  }
  for (int n = p.first(); n < p.top(); ++n) {
    const auto& t = s.tree(n);
    const auto& t2 = s.tree(n + 1);
    if (!t || !t2) continue;
    std::set<CellId> image;
    for (const auto& c : *t) image.insert(s.lift(n, n + 1, c));
    if (image != *t2) {
      rep.violations.push_back("level " + std::to_string(n) + ": s(T_n) differs from T_" + std::to_string(n + 1));
    }
    for (const auto& c : *t) {
      if (!c.is_edge()) continue;
      const auto& [o, tt] = p.level(n).endpoints(c);
      const auto& [o2, t2e] = p.level(n + 1).endpoints(s.lift(n, n + 1, c));
      if (o2 != s.lift(n, n + 1, o) || t2e != s.lift(n, n + 1, tt)) {
        rep.violations.push_back(where(n, c) + ": section on T is not a graph morphism");
      }
    }
  }
  return rep;
}

/// (C1): o(s_ik(a)) = s_{i0 k}(o(s_{i i0}(a))) and likewise for t, for all
/// k in [i0, N], one joint i0 for both endpoints.
inline CoherenceReport check_c1(const TruncatedPrograph& p, const SectionFamily& s) {
  CoherenceReport rep{"C1", {}};
  const int top = p.top();
  for (int i = p.first(); i < top; ++i) {
    for (const auto& [a, ends] : p.level(i).edges()) {
      auto holds = [&](int i0, int k) {
        const CellId lifted = s.lift(i, i0, a);
        const auto& [o0, t0] = p.level(i0).endpoints(lifted);
        const auto& [ok, tk] = p.level(k).endpoints(s.lift(i, k, a));
        return ok == s.lift(i0, k, o0) && tk == s.lift(i0, k, t0);
      };
      rep.add(i, to_string(a), top, minimal_witness(i, top, holds));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Colimit

struct ColimitClass {
  int level = 0;      // level of the minimal representative
  CellId cell;        // minimal representative
  CellId top_image;   // s_{level, N}(cell)
};

struct ColimitResult {
  Graph graph;
  std::map<CellId, ColimitClass> classes;            // colimit label -> class data
  std::map<std::pair<int, CellId>, CellId> label_of;  // (level, cell) -> colimit label
  std::map<CellId, CellId> label_of_top_image;        // level-N image -> colimit label
  std::vector<std::string> outside_horizon;           // edges whose endpoints left the range
  int depth = 0;                                      // classes come from levels <= depth
};

/// Colimit label of a class: its minimal representative, with the level
/// folded into the tag ("P@2") so that labels stay unique.
inline CellId colimit_label(int level, const CellId& c) {
  return CellId{c.kind, c.tag + "@" + std::to_string(level), c.index};
}

inline ColimitResult colimit_graph(const TruncatedPrograph& p, const SectionFamily& s, int horizon) {
  const int top = p.top();
  const int depth = top - horizon;
  if (horizon < 1 || depth < p.first()) {
    throw Error(ErrorCode::HorizonTooLarge, "horizon " + std::to_string(horizon) + " leaves no level");
  }
  std::vector<std::pair<int, CellId>> cells;
  std::map<std::pair<int, CellId>, std::size_t> idx;
  for (int n = p.first(); n <= depth; ++n) {
    for (const auto& c : p.level(n).cells()) {
      idx.emplace(std::pair{n, c}, cells.size());
      cells.emplace_back(n, c);
    }
  }
  DisjointSet ds(cells.size());
  for (const auto& [n, c] : cells) {
    if (n < depth) ds.unite(idx.at({n, c}), idx.at({n + 1, s.lift(n, n + 1, c)}));
  }
  ColimitResult out;
  out.depth = depth;
  std::map<std::size_t, std::size_t> root_rep;  // root -> index of minimal (level, cell)
  for (std::size_t i = 0; i < cells.size(); ++i) root_rep.emplace(ds.find(i), i);  // ordered by level, cell
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& [rl, rc] = cells[root_rep.at(ds.find(i))];
    const CellId label = colimit_label(rl, rc);
    out.label_of.emplace(cells[i], label);
    if (!out.classes.count(label)) {
      const CellId img = s.lift(rl, top, rc);
      out.classes.emplace(label, ColimitClass{rl, rc, img});
      out.label_of_top_image.emplace(img, label);
    }
  }
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (const auto& [label, cls] : out.classes) {
    if (label.is_vertex()) {
      vs.push_back(label);
      continue;
    }
    const auto& [o, t] = p.level(top).endpoints(cls.top_image);
    auto io = out.label_of_top_image.find(o), it = out.label_of_top_image.find(t);
    if (io == out.label_of_top_image.end() || it == out.label_of_top_image.end()) {
      out.outside_horizon.push_back(to_string(label));
      continue;
    }
    es.push_back({label, io->second, it->second});
  }
  out.graph = make_graph(vs, es);
  return out;
}

struct SylvestreReport {
  bool is_tree = false;
  std::size_t excluded_edges = 0;
  std::optional<std::vector<CellId>> cycle;
  ColimitResult colimit;
};

inline SylvestreReport is_sylvestre_truncated(const TruncatedPrograph& p, const SectionFamily& s,
                                              int horizon) {
  SylvestreReport rep;
  rep.colimit = colimit_graph(p, s, horizon);
  rep.is_tree = is_tree(rep.colimit.graph);
  rep.excluded_edges = rep.colimit.outside_horizon.size();
  rep.cycle = find_cycle(rep.colimit.graph);
  return rep;
}

}  // namespace prograph
