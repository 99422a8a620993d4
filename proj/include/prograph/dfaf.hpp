#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prograph/action.hpp"
#include "prograph/coherence.hpp"
#include "prograph/pro_group.hpp"
#include "prograph/prograph.hpp"

namespace prograph {

struct ProActionBundle {
  TruncatedPrograph prograph;
  GroupSystem groups;
  std::vector<GraphAction> actions;  // indexed like the levels
  SectionFamily s;                   // with marked trees T_n
  GroupSectionFamily r;

  int first() const noexcept { return prograph.first(); }
  int top() const noexcept { return prograph.top(); }
  const GraphAction& action(int n) const { return actions.at(static_cast<std::size_t>(n - first())); }
};

/// Shape, per-level action validity, and T_n being a fundamental-domain
/// tree at each level.
inline CheckReport validate_bundle(const ProActionBundle& b) {
  CheckReport rep;
  auto at = [](int n) { return "level " + std::to_string(n) + ": "; };
  if (b.groups.first() != b.first() || b.groups.top() != b.top() ||
      b.actions.size() != b.prograph.levels().size()) {
    rep.violations.push_back("bundle levels do not align");
    return rep;
  }
  for (const auto& v : validate_prograph(b.prograph).violations) rep.violations.push_back(v);
  for (const auto& v : validate_sections(b.prograph, b.s).violations) rep.violations.push_back(v);
  for (const auto& v : validate_group_system(b.groups).violations) rep.violations.push_back(v);
  for (const auto& v : validate_group_sections(b.groups, b.r).violations) rep.violations.push_back(v);
  for (int n = b.first(); n <= b.top(); ++n) {
    const GraphAction& a = b.action(n);
    if (!(a.graph == b.prograph.level(n)) || a.group.table() != b.groups.level(n).table()) {
      rep.violations.push_back(at(n) + "action does not match the level");
      continue;
    }
    for (const auto& v : check_action(a).violations) rep.violations.push_back(at(n) + v);
    const auto& t = b.s.tree(n);
    if (!t) {
      rep.violations.push_back(at(n) + "no marked tree");
      continue;
    }
    auto q = orbit_quotient(a.graph, a.act);
    std::set<CellId> images;
    for (const auto& c : *t) images.insert(q.projection(c));
    if (images.size() != t->size()) rep.violations.push_back(at(n) + "tree meets an orbit twice");
    for (const auto& v : q.quotient.vertices()) {
      if (!images.count(v)) rep.violations.push_back(at(n) + "vertex orbit " + to_string(v) + " missed by tree");
    }
  }
  return rep;
}

/// θ(g·x) = φ(g)·θ(x) on adjacent levels, plus the top-to-first composite.
inline CheckReport check_equivariance(const ProActionBundle& b) {
  CheckReport rep;
  auto check_pair = [&](int m, int n) {
    const GraphAction& am = b.action(m);
    const GraphAction& an = b.action(n);
    for (Element g = 0; g < am.group.order(); ++g) {
      const Element fg = b.groups.phi(m, n, g);
      for (const auto& x : am.graph.cells()) {
        const CellId lhs = b.prograph.theta(m, n, am.apply(g, x));
        const CellId rhs = an.apply(fg, b.prograph.theta(m, n, x));
        if (lhs != rhs) {
          rep.violations.push_back("levels " + std::to_string(m) + "->" + std::to_string(n) + ": g=" +
                                   am.group.label(g) + " x=" + to_string(x) + ": " + to_string(lhs) +
                                   " != " + to_string(rhs));
        }
      }
    }
  };
  for (int n = b.first(); n < b.top(); ++n) check_pair(n + 1, n);
  if (b.top() - b.first() >= 2) check_pair(b.top(), b.first());
  return rep;
}

/// (C3): s_{i0 k}(r_{i i0}(g)·s_{i i0}(a)) = r_{ik}(g)·s_{ik}(a), every cell.
inline std::optional<int> c3_witness(const ProActionBundle& b, int i, Element g, const CellId& a) {
  auto holds = [&](int i0, int k) {
    const CellId mid = b.action(i0).apply(b.r.lift(i, i0, g), b.s.lift(i, i0, a));
    return b.s.lift(i0, k, mid) == b.action(k).apply(b.r.lift(i, k, g), b.s.lift(i, k, a));
  };
  return minimal_witness(i, b.top(), holds);
}

inline CoherenceReport check_c3(const ProActionBundle& b) {
  CoherenceReport rep{"C3", {}};
  for (int i = b.first(); i < b.top(); ++i) {
    const GraphAction& a = b.action(i);
    for (Element g = 0; g < a.group.order(); ++g) {
      for (const auto& c : a.graph.cells()) {
        rep.add(i, a.group.label(g) + " . " + to_string(c), b.top(), c3_witness(b, i, g, c));
      }
    }
  }
  return rep;
}

/// (C4): s_{ik}(g·α) = r_{ik}(g)·α_k for α in T_i, α_k = s_{ik}(α).
inline CoherenceReport check_c4(const ProActionBundle& b) {
  CoherenceReport rep{"C4", {}};
  for (int i = b.first(); i < b.top(); ++i) {
    const auto& t = b.s.tree(i);
    if (!t) continue;
    const GraphAction& a = b.action(i);
    for (const auto& alpha : *t) {
      for (Element g = 0; g < a.group.order(); ++g) {
        auto holds = [&](int, int k) {
          return b.s.lift(i, k, a.apply(g, alpha)) ==
                 b.action(k).apply(b.r.lift(i, k, g), b.s.lift(i, k, alpha));
        };
        rep.add(i, a.group.label(g) + " . " + to_string(alpha), b.top(), minimal_witness(i, b.top(), holds));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Induced action on the colimit

/// A group class given by a representative at some level.
struct GroupClass {
  int level = 0;
  Element element = 0;
  std::string name;
};

enum class InducedOutcome { Defined, OutsideRange, Undetermined };

struct InducedValue {
  InducedOutcome outcome = InducedOutcome::Undetermined;
  std::optional<CellId> image;  // colimit label when defined
  int witness = 0;              // i0 used
};

/// g·a = class of r_{i i0}(g_i)·s_{i i0}(a_i) at the common level i and the
/// (C3) witness i0.  The class is located through its level-N image.
inline InducedValue induced_value(const ProActionBundle& b, const ColimitResult& col, const GroupClass& g,
                                  int level, const CellId& cell) {
  const int i = std::max(level, g.level);
  const CellId ai = b.s.lift(level, i, cell);
  const Element gi = b.r.lift(g.level, i, g.element);
  InducedValue out;
  auto i0 = c3_witness(b, i, gi, ai);
  if (!i0 || classify(i, b.top(), i0) == Status::Undetermined) return out;
  out.witness = *i0;
  const CellId at_i0 = b.action(*i0).apply(b.r.lift(i, *i0, gi), b.s.lift(i, *i0, ai));
  auto it = col.label_of_top_image.find(b.s.lift(*i0, b.top(), at_i0));
  if (it == col.label_of_top_image.end()) {
    out.outcome = InducedOutcome::OutsideRange;
    return out;
  }
  out.outcome = InducedOutcome::Defined;
  out.image = it->second;
  return out;
}

struct InducedAction {
  ColimitResult colimit;
  std::vector<GroupClass> elements;
  ActionMaps maps;  // maps[j][label] = elements[j]·label, where defined
  std::size_t outside_range = 0;
  std::vector<std::string> undetermined;     // C3Undetermined pairs
  std::vector<std::string> inconsistencies;  // representative dependence
};

inline InducedAction induced_colimit_action(const ProActionBundle& b, const std::vector<GroupClass>& elements,
                                            int horizon) {
  InducedAction out;
  out.colimit = colimit_graph(b.prograph, b.s, horizon);
  out.elements = elements;
  for (const auto& g : elements) {
    CellMap m;
    for (const auto& [label, cls] : out.colimit.classes) {
      const InducedValue v = induced_value(b, out.colimit, g, cls.level, cls.cell);
      if (v.outcome == InducedOutcome::Undetermined) {
        out.undetermined.push_back(g.name + " . " + to_string(label));
        continue;
      }
      // Same class, representative one level up.
      const int up = std::max(cls.level, g.level) + 1;
      if (up <= out.colimit.depth) {
        const InducedValue w = induced_value(b, out.colimit, g, up, b.s.lift(cls.level, up, cls.cell));
        if (w.outcome == InducedOutcome::Defined && v.outcome == InducedOutcome::Defined &&
            w.image != v.image) {
          out.inconsistencies.push_back(g.name + " . " + to_string(label));
        }
      }
      if (v.outcome == InducedOutcome::OutsideRange) {
        ++out.outside_range;
        continue;
      }
      m.emplace(label, *v.image);
    }
    out.maps.push_back(std::move(m));
  }
  return out;
}

/// C3Undetermined when the horizon does not settle g·a.
inline CellId induced_act(const ProActionBundle& b, const ColimitResult& col, const GroupClass& g,
                          const CellId& label) {
  const auto& cls = col.classes.at(label);
  const InducedValue v = induced_value(b, col, g, cls.level, cls.cell);
  if (v.outcome == InducedOutcome::Undetermined) {
    throw Error(ErrorCode::C3Undetermined, g.name + " . " + to_string(label));
  }
  if (v.outcome == InducedOutcome::OutsideRange) {
    throw Error(ErrorCode::HorizonTooLarge, g.name + " . " + to_string(label) + " leaves the colimit range");
  }
  return *v.image;
}

struct FundamentalDomainReport {
  Graph tree;                              // T̄ inside the colimit
  std::vector<std::string> coverage_gaps;  // cells not reached by the prefix
  std::vector<std::string> violations;     // distinct T̄ cells in one orbit
  bool ok() const { return violations.empty(); }
  bool complete() const { return coverage_gaps.empty(); }
};

/// T̄ = classes of the first-level tree.  Every colimit cell should be a
/// prefix translate of a T̄ cell, and no two T̄ cells may share an orbit.
inline FundamentalDomainReport check_colimit_fundamental_domain(const ProActionBundle& b,
                                                                const InducedAction& ia) {
  FundamentalDomainReport rep;
  const auto& t = b.s.tree(b.first());
  if (!t) throw Error(ErrorCode::InvalidInput, "no marked tree at the first level");
  std::set<CellId> tbar;
  for (const auto& c : *t) tbar.insert(ia.colimit.label_of.at({b.first(), c}));
  rep.tree = subgraph_of_cells(ia.colimit.graph, [&] {
    std::set<CellId> in_graph;
    for (const auto& c : tbar) {
      if (ia.colimit.graph.contains(c)) in_graph.insert(c);
    }
    return in_graph;
  }());
  std::set<CellId> covered;
  for (std::size_t j = 0; j < ia.maps.size(); ++j) {
    for (const auto& c : tbar) {
      auto it = ia.maps[j].find(c);
      if (it == ia.maps[j].end()) continue;
      covered.insert(it->second);
      if (it->second != c && tbar.count(it->second)) {
        rep.violations.push_back(ia.elements[j].name + " moves " + to_string(c) + " onto " +
                                 to_string(it->second));
      }
    }
  }
  for (const auto& c : ia.colimit.graph.cells()) {
    if (!covered.count(c)) rep.coverage_gaps.push_back(to_string(c));
  }
  return rep;
}

}  // namespace prograph
