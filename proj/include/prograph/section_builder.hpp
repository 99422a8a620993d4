#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prograph/action.hpp"
#include "prograph/amalgam.hpp"
#include "prograph/dfaf.hpp"
#include "prograph/pro_group.hpp"
#include "prograph/prograph.hpp"

namespace prograph {

/// H_n = ker π_n, known through the finite quotients G_n = H/H_n.
template <class T>
struct Filtration {
  GroupSystem quotients;
  std::function<Element(const T&, int)> project;

  int first() const noexcept { return quotients.first(); }
  int top() const noexcept { return quotients.top(); }
};

/// π_n multiplicative on the first k elements (so each H_n is normal there)
/// and φ_{n+1,n}∘π_{n+1} = π_n.
template <class T>
CheckReport validate_filtration(const EnumeratedGroup<T>& h, const Filtration<T>& f, std::size_t k) {
  CheckReport rep = validate_group_system(f.quotients);
  const auto xs = h.prefix(k);
  for (int n = f.first(); n <= f.top(); ++n) {
    const GroupTable& g = f.quotients.level(n);
    for (const auto& x : xs) {
      for (const auto& y : xs) {
        if (f.project(h.mul(x, y), n) != g.mul(f.project(x, n), f.project(y, n))) {
          rep.violations.push_back("level " + std::to_string(n) + ": projection not multiplicative at " +
                                   h.name(x) + ", " + h.name(y));
        }
      }
      if (n < f.top() && f.quotients.step(n).at(f.project(x, n + 1)) != f.project(x, n)) {
        rep.violations.push_back("level " + std::to_string(n) + ": projections disagree on " + h.name(x));
      }
    }
  }
  return rep;
}

/// A group acting on a tree Γ, seen through a finite ball.  `tree` is a
/// finite subtree that is a fundamental domain.
template <class T>
struct TreeAction {
  Graph ball;
  std::set<CellId> tree;
  std::function<std::optional<CellId>(const T&, const CellId&)> act;  // nothing outside the ball
};

/// Λ_j = elements[0..j] and Δ_j = Λ_j·T, cells kept in order of first
/// appearance, so every Δ_j is a prefix of `cells`.
template <class T>
struct Exhaustion {
  std::vector<T> elements;
  std::vector<CellId> cells;
  std::vector<std::pair<std::size_t, CellId>> producer;  // cells[c] = elements[first]·second
  std::vector<std::size_t> sizes;                        // |Δ_j|

  std::size_t delta_size(std::size_t j) const { return sizes.at(j); }
};

template <class T>
void extend_exhaustion(Exhaustion<T>& ex, const EnumeratedGroup<T>& h, const TreeAction<T>* action,
                       std::size_t j) {
  std::set<CellId> seen(ex.cells.begin(), ex.cells.end());
  while (ex.elements.size() <= j) {
    const std::size_t idx = ex.elements.size();
    ex.elements.push_back(h.at(idx));
    if (action) {
      for (const auto& alpha : action->tree) {
        auto img = action->act(ex.elements.back(), alpha);
        if (!img) {
          throw Error(ErrorCode::BallTooSmall,
                      h.name(ex.elements.back()) + " . " + to_string(alpha) + " leaves the ball; enlarge the radius");
        }
        if (seen.insert(*img).second) {
          ex.cells.push_back(*img);
          ex.producer.emplace_back(idx, alpha);
        }
      }
    }
    ex.sizes.push_back(ex.cells.size());
  }
}

/// Stab(α) for α in T, read off the first `scan` elements.
template <class T>
std::map<CellId, std::vector<T>> tree_stabilizers(const EnumeratedGroup<T>& h, const TreeAction<T>& action,
                                                  std::size_t scan) {
  std::map<CellId, std::vector<T>> out;
  for (const auto& alpha : action.tree) out[alpha];
  for (const auto& x : h.prefix(scan)) {
    for (const auto& alpha : action.tree) {
      if (action.act(x, alpha) == alpha) out[alpha].push_back(x);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quotient levels Γ_n = H_n\Γ realised as G_n ×_{Stab} T

/// Cells of Γ_n are pairs (α, gS_α) with S_α = π_n(Stab α); the label is
/// tag = name of α, index = least element of the coset.
class QuotientLevel {
 public:
  QuotientLevel() = default;
  QuotientLevel(const GroupTable& g, const Graph& ball, const std::set<CellId>& tree,
                const std::map<CellId, std::set<Element>>& stab)
      : group_(g) {
    for (const auto& alpha : tree) {
      std::vector<Element> rep(g.order());
      for (Element x = 0; x < g.order(); ++x) {
        Element m = x;
        for (Element s : stab.at(alpha)) m = std::min(m, g.mul(x, s));
        rep[x] = m;
      }
      reps_.emplace(alpha, std::move(rep));
    }
    std::vector<CellId> vs;
    std::vector<EdgeSpec> es;
    for (const auto& alpha : tree) {
      for (Element x = 0; x < g.order(); ++x) {
        if (reps_.at(alpha)[x] != x) continue;
        if (alpha.is_vertex()) {
          vs.push_back(cell(alpha, x));
        } else {
          const auto& [o, t] = ball.endpoints(alpha);
          if (!tree.count(o) || !tree.count(t)) {
            throw Error(ErrorCode::InvalidInput, "tree is not closed under endpoints at " + to_string(alpha));
          }
          es.push_back({cell(alpha, x), cell(o, x), cell(t, x)});
        }
      }
    }
    graph_ = make_graph(vs, es);
    for (const auto& c : graph_.cells()) origin_of_.emplace(c, split(c));
  }

  const Graph& graph() const noexcept { return graph_; }
  const GroupTable& group() const noexcept { return group_; }

  /// g·α_n.
  CellId cell(const CellId& alpha, Element g) const {
    return CellId{alpha.kind, to_string(alpha), static_cast<std::int64_t>(reps_.at(alpha).at(g))};
  }

  /// (α, representative) of a cell.
  const std::pair<CellId, Element>& parts(const CellId& c) const { return origin_of_.at(c); }

  GraphAction action() const {
    GraphAction a{group_, graph_, {}};
    for (Element g = 0; g < group_.order(); ++g) {
      CellMap m;
      for (const auto& c : graph_.cells()) {
        const auto& [alpha, x] = parts(c);
        m.emplace(c, cell(alpha, group_.mul(g, x)));
      }
      a.act.push_back(std::move(m));
    }
    return a;
  }

 private:
  std::pair<CellId, Element> split(const CellId& c) const {
    for (const auto& [alpha, rep] : reps_) {
      if (alpha.kind == c.kind && to_string(alpha) == c.tag) return {alpha, static_cast<Element>(c.index)};
    }
    throw Error(ErrorCode::UnknownCell, to_string(c));
  }

  GroupTable group_;
  std::map<CellId, std::vector<Element>> reps_;
  Graph graph_;
  std::map<CellId, std::pair<CellId, Element>> origin_of_;
};

// ---------------------------------------------------------------------------
// Separation and the index ledger

struct SeparationIndices {
  int injective = 0;   // Λ injects into G_n
  int stabilizer = 0;  // λ ∉ Stab(α) implies λ̄ ∉ Stab(α_n)
};

template <class T>
std::optional<int> injective_level_of(const Filtration<T>& f, const std::vector<T>& lambda, int from, int to) {
  for (int n = from; n <= to; ++n) {
    std::set<Element> seen;
    bool ok = true;
    for (const auto& x : lambda) ok = ok && seen.insert(f.project(x, n)).second;
    if (ok) return n;
  }
  return std::nullopt;
}

template <class T>
bool separates(const Filtration<T>& f, const TreeAction<T>& action, const std::map<CellId, std::vector<T>>& stab,
               const std::vector<T>& lambda, int n) {
  for (const auto& alpha : action.tree) {
    std::set<Element> image;
    for (const auto& s : stab.at(alpha)) image.insert(f.project(s, n));
    for (const auto& x : lambda) {
      if (action.act(x, alpha) != alpha && image.count(f.project(x, n))) return false;
    }
  }
  return true;
}

template <class T>
SeparationIndices separation_indices(const TreeAction<T>& action, const std::vector<T>& lambda,
                                     const std::map<CellId, std::vector<T>>& stab, const Filtration<T>& f,
                                     int depth) {
  const int top = std::min(depth, f.top());
  auto inj = injective_level_of(f, lambda, f.first(), top);
  if (!inj) throw Error(ErrorCode::SeparationNotWitnessed, "no injective level up to " + std::to_string(top));
  for (int n = f.first(); n <= top; ++n) {
    if (separates(f, action, stab, lambda, n)) return {*inj, n};
  }
  throw Error(ErrorCode::SeparationNotWitnessed, "stabilizers not separated up to " + std::to_string(top));
}

/// i_0 < i_1 < ... and n_0 < n_1 < ... with Λ_{i_k} (and Δ_{i_k}) injecting
/// at n_k and Λ_{i_{k+1}} surjecting onto G_{n_k}.
struct Ledger {
  std::vector<std::size_t> i;
  std::vector<int> n;
};

struct BuilderOptions {
  std::size_t stabilizer_scan = 64;
  std::size_t max_prefix = 200000;
};

namespace detail {

template <class T>
struct LedgerContext {
  const EnumeratedGroup<T>& h;
  const Filtration<T>& f;
  const TreeAction<T>* action;                         // null for the group-only ledger
  const std::map<CellId, std::vector<T>>* stab;        // with action
  const std::map<int, QuotientLevel>* levels;          // with action
  Exhaustion<T>& ex;
  BuilderOptions opt;

  std::vector<T> lambda(std::size_t j) const {
    return {ex.elements.begin(), ex.elements.begin() + static_cast<std::ptrdiff_t>(j + 1)};
  }

  CellId theta(int n, std::size_t c) const {
    const auto& [idx, alpha] = ex.producer.at(c);
    return levels->at(n).cell(alpha, f.project(ex.elements.at(idx), n));
  }

  bool delta_injects(std::size_t j, int n) const {
    std::set<CellId> seen;
    for (std::size_t c = 0; c < ex.delta_size(j); ++c) {
      if (!seen.insert(theta(n, c)).second) return false;
    }
    return true;
  }

  bool admissible(std::size_t j, int n) const {
    const auto l = lambda(j);
    if (!injective_level_of(f, l, n, n)) return false;
    if (!action) return true;
    return separates(f, *action, *stab, l, n) && delta_injects(j, n);
  }
};

template <class T>
Ledger build_ledger(LedgerContext<T>& ctx, int depth) {
  Ledger led;
  extend_exhaustion(ctx.ex, ctx.h, ctx.action, 0);
  // Λ_0 = {e} and Δ_0 = T inject at every level.
  if (!ctx.admissible(0, ctx.f.first())) {
    throw Error(ErrorCode::InvalidInput, "enumeration must start with the identity");
  }
  led.i.push_back(0);
  led.n.push_back(ctx.f.first());
  while (led.n.back() < depth) {
    const int nk = led.n.back();
    const std::size_t order = ctx.f.quotients.level(nk).order();
    // i strictly increases unless a finite enumeration is exhausted.
    const std::size_t last = ctx.h.size ? ctx.h.size - 1 : ctx.opt.max_prefix;
    const std::size_t floor_i = std::min(led.i.back() + 1, last);
    std::set<Element> hit;
    std::size_t j = 0;
    for (; j <= last && j < ctx.opt.max_prefix; ++j) {
      extend_exhaustion(ctx.ex, ctx.h, ctx.action, j);
      hit.insert(ctx.f.project(ctx.ex.elements[j], nk));
      if (j >= floor_i && hit.size() == order) break;
    }
    if (j > last || j == ctx.opt.max_prefix) {
      throw Error(ErrorCode::SeparationNotWitnessed,
                  "prefix of " + std::to_string(j) + " elements does not cover level " + std::to_string(nk));
    }
    int next = nk + 1;
    while (next <= depth && !ctx.admissible(j, next)) ++next;
    if (next > depth) {
      throw Error(ErrorCode::SeparationNotWitnessed,
                  "Λ_" + std::to_string(j) + " is not separated by level " + std::to_string(depth));
    }
    led.i.push_back(j);
    led.n.push_back(next);
  }
  return led;
}

/// Steps s_{l,l+1} for lo <= l < hi from s_{lo,hi}: s_{l,l+1} = θ_{hi,l+1}∘s_{l,hi},
/// and s_{l+1,hi} extends s_{l,hi}∘θ_{l+1,l} on the image by the first lift.
template <class X, class Cells, class Theta>
std::vector<std::map<X, X>> interpolate_steps(int lo, int hi, std::map<X, X> s_lo_hi, Cells cells, Theta theta) {
  std::vector<std::map<X, X>> steps;
  std::map<X, X> cur = std::move(s_lo_hi);
  for (int l = lo; l < hi; ++l) {
    std::map<X, X> step;
    std::set<X> image;
    for (const auto& [x, y] : cur) {
      step.emplace(x, theta(hi, l + 1, y));
      image.insert(step.at(x));
    }
    steps.push_back(std::move(step));
    if (l + 1 == hi) break;
    std::map<X, X> next;
    const auto top_cells = cells(hi);
    for (const X& x : cells(l + 1)) {
      if (image.count(x)) {
        next.emplace(x, cur.at(theta(l + 1, l, x)));
        continue;
      }
      for (const X& y : top_cells) {
        if (theta(hi, l + 1, y) == x) {
          next.emplace(x, y);
          break;
        }
      }
    }
    cur = std::move(next);
  }
  return steps;
}

template <class T>
std::vector<std::vector<Element>> group_steps(const Filtration<T>& f, const Exhaustion<T>& ex, const Ledger& led) {
  const GroupSystem& sys = f.quotients;
  std::vector<std::vector<Element>> steps;
  for (std::size_t k = 0; k + 1 < led.n.size(); ++k) {
    const int lo = led.n[k], hi = led.n[k + 1];
    std::map<Element, Element> s;
    const std::size_t order = sys.level(lo).order();
    for (std::size_t j = 0; j <= led.i[k + 1] && s.size() < order; ++j) {
      s.emplace(f.project(ex.elements[j], lo), f.project(ex.elements[j], hi));  // first preimage wins
    }
    auto cells = [&](int l) {
      std::vector<Element> out(sys.level(l).order());
      for (Element g = 0; g < out.size(); ++g) out[g] = g;
      return out;
    };
    auto theta = [&](int m, int n, Element g) { return sys.phi(m, n, g); };
    for (auto& st : interpolate_steps<Element>(lo, hi, s, cells, theta)) {
      std::vector<Element> v(st.size());
      for (const auto& [g, lift] : st) v[g] = lift;
      steps.push_back(std::move(v));
    }
  }
  return steps;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders

template <class T>
struct GroupSectionsResult {
  GroupSystem groups;
  GroupSectionFamily r;
  Ledger ledger;
  Exhaustion<T> exhaustion;
};

/// r_{n_k n_{k+1}} = π_{n_{k+1}}∘ρ_{n_k} with ρ the first preimage in Λ_{i_{k+1}}.
template <class T>
GroupSectionsResult<T> build_group_sections(const EnumeratedGroup<T>& h, const Filtration<T>& f, int depth,
                                            BuilderOptions opt = {}) {
  if (depth > f.top() || depth < f.first()) throw Error(ErrorCode::InvalidInput, "depth outside the filtration");
  GroupSectionsResult<T> out;
  detail::LedgerContext<T> ctx{h, f, nullptr, nullptr, nullptr, out.exhaustion, opt};
  out.ledger = detail::build_ledger(ctx, depth);
  std::vector<GroupTable> levels;
  std::vector<std::vector<Element>> steps;
  for (int n = f.first(); n <= depth; ++n) levels.push_back(f.quotients.level(n));
  for (int n = f.first(); n < depth; ++n) steps.push_back(f.quotients.step(n));
  out.groups = GroupSystem(f.first(), levels, steps);
  out.r = GroupSectionFamily{f.first(), {}};
  for (auto& s : detail::group_steps(f, out.exhaustion, out.ledger)) out.r.steps.push_back(std::move(s));
  return out;
}

template <class T>
struct GraphSectionsResult {
  TruncatedPrograph prograph;
  SectionFamily s;
  Ledger ledger;
  Exhaustion<T> exhaustion;
  std::map<int, QuotientLevel> levels;
  std::map<CellId, std::vector<T>> stabilizers;
};

namespace detail {

template <class T>
GraphSectionsResult<T> build_graph(const EnumeratedGroup<T>& h, const TreeAction<T>& action,
                                   const Filtration<T>& f, int depth, BuilderOptions opt) {
  if (depth > f.top() || depth < f.first()) throw Error(ErrorCode::InvalidInput, "depth outside the filtration");
  for (const auto& c : action.tree) {
    if (!action.ball.contains(c)) throw Error(ErrorCode::UnknownCell, "tree cell " + to_string(c) + " not in ball");
  }
  if (!is_tree(subgraph_of_cells(action.ball, action.tree))) {
    throw Error(ErrorCode::InvalidInput, "marked cells do not form a tree");
  }
  GraphSectionsResult<T> out;
  out.stabilizers = tree_stabilizers(h, action, opt.stabilizer_scan);
  for (const auto& [alpha, st] : out.stabilizers) {
    if (!alpha.is_edge()) continue;
    const auto& [o, t] = action.ball.endpoints(alpha);
    for (const auto& x : st) {
      if (action.act(x, o) != o || action.act(x, t) != t) {
        throw Error(ErrorCode::InvalidAction, h.name(x) + " fixes " + to_string(alpha) + " but not its ends");
      }
    }
  }
  for (int n = f.first(); n <= depth; ++n) {
    std::map<CellId, std::set<Element>> st;
    for (const auto& [alpha, xs] : out.stabilizers) {
      for (const auto& x : xs) st[alpha].insert(f.project(x, n));
    }
    out.levels.emplace(n, QuotientLevel(f.quotients.level(n), action.ball, action.tree, st));
  }
  LedgerContext<T> ctx{h, f, &action, &out.stabilizers, &out.levels, out.exhaustion, opt};
  out.ledger = build_ledger(ctx, depth);

  auto lv = [&](int n) -> const QuotientLevel& { return out.levels.at(n); };
  auto theta = [&](int m, int n, const CellId& c) {
    const auto& [alpha, x] = lv(m).parts(c);
    return lv(n).cell(alpha, f.quotients.phi(m, n, x));
  };
  std::vector<Graph> graphs;
  std::vector<GraphMorphism> steps;
  for (int n = f.first(); n <= depth; ++n) graphs.push_back(lv(n).graph());
  for (int n = f.first(); n < depth; ++n) {
    GraphMorphism m{lv(n + 1).graph(), lv(n).graph(), {}};
    for (const auto& c : m.source.cells()) m.map.emplace(c, theta(n + 1, n, c));
    steps.push_back(std::move(m));
  }
  out.prograph = TruncatedPrograph(f.first(), graphs, steps);

  out.s = SectionFamily{f.first(), {}, {}};
  for (int n = f.first(); n <= depth; ++n) {
    std::set<CellId> t;
    for (const auto& alpha : action.tree) t.insert(lv(n).cell(alpha, f.quotients.level(n).identity()));
    out.s.trees.push_back(std::move(t));
  }
  auto cells = [&](int l) { return lv(l).graph().cells(); };
  for (std::size_t k = 0; k + 1 < out.ledger.n.size(); ++k) {
    const int lo = out.ledger.n[k], hi = out.ledger.n[k + 1];
    // σ_{n_k}: first preimage in Δ_{i_{k+1}}; Δ_{i_k} comes first and injects.
    std::map<CellId, CellId> s;
    const std::size_t want = lv(lo).graph().num_cells();
    for (std::size_t c = 0; c < out.exhaustion.delta_size(out.ledger.i[k + 1]) && s.size() < want; ++c) {
      s.emplace(ctx.theta(lo, c), ctx.theta(hi, c));
    }
    for (auto& st : interpolate_steps<CellId>(lo, hi, s, cells, theta)) out.s.steps.push_back(std::move(st));
  }
  return out;
}

}  // namespace detail

template <class T>
GraphSectionsResult<T> build_graph_sections(const EnumeratedGroup<T>& h, const TreeAction<T>& action,
                                            const Filtration<T>& f, int depth, BuilderOptions opt = {}) {
  return detail::build_graph(h, action, f, depth, opt);
}

template <class T>
struct DfafResult {
  ProActionBundle bundle;
  Ledger ledger;
  Exhaustion<T> exhaustion;
  std::map<int, QuotientLevel> levels;
};

/// Graph and group sections from one ledger with Δ_k = Λ_k·T.
template <class T>
DfafResult<T> build_dfaf(const EnumeratedGroup<T>& h, const TreeAction<T>& action, const Filtration<T>& f,
                         int depth, BuilderOptions opt = {}) {
  auto g = detail::build_graph(h, action, f, depth, opt);
  DfafResult<T> out;
  out.ledger = g.ledger;
  out.levels = g.levels;
  std::vector<GroupTable> levels;
  std::vector<std::vector<Element>> steps;
  for (int n = f.first(); n <= depth; ++n) levels.push_back(f.quotients.level(n));
  for (int n = f.first(); n < depth; ++n) steps.push_back(f.quotients.step(n));
  GroupSectionFamily r{f.first(), {}};
  for (auto& s : detail::group_steps(f, g.exhaustion, g.ledger)) r.steps.push_back(std::move(s));
  out.bundle = ProActionBundle{g.prograph, GroupSystem(f.first(), levels, steps), {}, g.s, r};
  for (int n = f.first(); n <= depth; ++n) out.bundle.actions.push_back(g.levels.at(n).action());
  out.exhaustion = std::move(g.exhaustion);
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction: ψ(x) = class of θ_{n_k}(x) for x in Δ_{i_k}

struct ReconstructionReport {
  std::map<CellId, CellId> psi;         // Γ cell -> colimit label
  std::vector<std::string> violations;  // non-injective or endpoint mismatch
  std::size_t unreached = 0;            // colimit cells outside ψ(Δ)
  bool ok() const { return violations.empty(); }
};

template <class T>
ReconstructionReport reconstruction(const GraphSectionsResult<T>& b, const Filtration<T>& f, const TreeAction<T>& action,
                                    const ColimitResult& col) {
  ReconstructionReport rep;
  std::size_t done = 0;
  for (std::size_t k = 0; k < b.ledger.n.size(); ++k) {
    const int n = b.ledger.n[k];
    if (n > col.depth) break;
    for (std::size_t c = done; c < b.exhaustion.delta_size(b.ledger.i[k]); ++c) {
      const auto& [idx, alpha] = b.exhaustion.producer[c];
      const CellId img = b.levels.at(n).cell(alpha, f.project(b.exhaustion.elements[idx], n));
      rep.psi.emplace(b.exhaustion.cells[c], col.label_of.at({n, img}));
    }
    done = b.exhaustion.delta_size(b.ledger.i[k]);
  }
  std::map<CellId, CellId> back;
  for (const auto& [x, l] : rep.psi) {
    auto [it, fresh] = back.emplace(l, x);
    if (!fresh) rep.violations.push_back(to_string(x) + " and " + to_string(it->second) + " share a class");
  }
  for (const auto& [x, l] : rep.psi) {
    if (!x.is_edge() || !col.graph.contains(l)) continue;
    const auto& [o, t] = action.ball.endpoints(x);
    auto po = rep.psi.find(o), pt = rep.psi.find(t);
    if (po == rep.psi.end() || pt == rep.psi.end()) continue;
    if (col.graph.origin(l) != po->second || col.graph.terminus(l) != pt->second) {
      rep.violations.push_back(to_string(x) + ": endpoints not preserved");
    }
  }
  for (const auto& c : col.graph.cells()) rep.unreached += !back.count(c);
  return rep;
}

// ---------------------------------------------------------------------------
// Amalgam inputs

/// Reduced words in (length, letters, tail) order, extended lazily.
inline EnumeratedGroup<ReducedWord> word_enumeration(const AmalgamPresentation& p) {
  auto cache = std::make_shared<std::vector<ReducedWord>>();
  auto length = std::make_shared<std::size_t>(0);
  auto pres = std::make_shared<AmalgamPresentation>(p);
  return {
      [cache, length, pres](std::size_t k) {
        while (cache->size() <= k) *cache = pres->enumerate(++*length);
        return (*cache)[k];
      },
      [pres](const ReducedWord& a, const ReducedWord& b) { return pres->multiply(a, b); },
      [](const ReducedWord&, int) -> Element { return 0; },
      [pres](const ReducedWord& w) { return pres->to_string(w); },
  };
}

/// `h` with its projections taken from the filtration.
template <class T>
EnumeratedGroup<T> projected(EnumeratedGroup<T> h, const Filtration<T>& f) {
  h.project = f.project;
  return h;
}

/// π_n on words from factor homomorphisms: images[n - first][i][x] is the
/// image in G_n of element x of factor i.
inline Filtration<ReducedWord> word_filtration(const AmalgamPresentation& p, GroupSystem quotients,
                                               std::vector<std::vector<std::vector<Element>>> images) {
  const int first = quotients.first();
  for (int n = first; n <= quotients.top(); ++n) {
    const auto& im = images.at(static_cast<std::size_t>(n - first));
    for (std::size_t i = 0; i < p.factors().size(); ++i) {
      auto h = check_homomorphism(p.factors()[i], quotients.level(n), im.at(i));
      if (!h.is_homomorphism) throw Error(ErrorCode::InvalidInput, "factor image is not a homomorphism");
    }
  }
  auto pres = std::make_shared<AmalgamPresentation>(p);
  auto sys = std::make_shared<GroupSystem>(quotients);
  auto imgs = std::make_shared<std::vector<std::vector<std::vector<Element>>>>(std::move(images));
  return {quotients, [pres, sys, imgs, first](const ReducedWord& w, int n) {
            const GroupTable& g = sys->level(n);
            const auto& im = imgs->at(static_cast<std::size_t>(n - first));
            Element acc = g.identity();
            for (const auto& l : pres->expand(w)) acc = g.mul(acc, im.at(l.factor).at(l.element));
            return acc;
          }};
}

/// The Bass-Serre ball as a tree action with the base segment as T.
inline TreeAction<ReducedWord> bass_serre_action(const AmalgamPresentation& p, std::size_t radius) {
  auto ball = std::make_shared<BassSerreBall>(p, radius);
  const ReducedWord e = p.identity();
  std::set<CellId> t{*ball->cell_of(e, 0), *ball->cell_of(e, 1), *ball->cell_of(e, 2)};
  return {ball->graph(), t, [ball](const ReducedWord& w, const CellId& c) { return ball->apply(w, c); }};
}

using Matrix2 = std::array<std::int64_t, 4>;  // row-major [a b; c d]

struct MatrixGroup {
  GroupTable table;
  std::vector<Matrix2> elements;  // indexed like the table
};

/// 2x2 matrices over Z/m generated by `gens`.
inline MatrixGroup matrix_group(std::int64_t m, const std::vector<Matrix2>& gens) {
  auto red = [m](Matrix2 a) {
    for (auto& x : a) x = floor_mod(x, m);
    return a;
  };
  auto mul = [&](const Matrix2& a, const Matrix2& b) {
    return red({a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3]});
  };
  std::map<Matrix2, Element> index;
  std::vector<Matrix2> elems{red({1, 0, 0, 1})};
  index.emplace(elems[0], 0);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      const Matrix2 x = mul(elems[i], red(g));
      if (index.emplace(x, elems.size()).second) elems.push_back(x);
    }
  }
  std::vector<std::string> labels;
  for (const auto& a : elems) {
    labels.push_back("[" + std::to_string(a[0]) + " " + std::to_string(a[1]) + "; " + std::to_string(a[2]) + " " +
                     std::to_string(a[3]) + "]");
  }
  std::vector<std::vector<Element>> table(elems.size(), std::vector<Element>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) table[i][j] = index.at(mul(elems[i], elems[j]));
  }
  std::vector<Element> g;
  for (const auto& x : gens) g.push_back(index.at(red(x)));
  return {GroupTable(std::move(labels), std::move(table), std::move(g)), std::move(elems)};
}

/// S = [0 -1; 1 0] of order 4 and U = [0 -1; 1 1] of order 6, with
/// S^2 = U^3 = -1.
inline constexpr Matrix2 kS{0, -1, 1, 0};
inline constexpr Matrix2 kU{0, -1, 1, 1};

/// Z/4 *_{Z/2} Z/6 onto SL_2(Z/p^n), levels 1..depth.  The tables grow as
/// p^{3n}, so keep depth small.
inline Filtration<ReducedWord> modular_filtration(std::int64_t p, int depth) {
  std::vector<MatrixGroup> groups;
  std::vector<std::vector<std::vector<Element>>> images;
  for (int n = 1; n <= depth; ++n) {
    groups.push_back(matrix_group(ipow(p, static_cast<unsigned>(n)), {kS, kU}));
    const GroupTable& g = groups.back().table;
    const Element s = g.generators()[0], u = g.generators()[1];
    std::vector<Element> fs, fu;
    for (long long k = 0; k < 4; ++k) fs.push_back(g.power(s, k));
    for (long long k = 0; k < 6; ++k) fu.push_back(g.power(u, k));
    images.push_back({fs, fu});
  }
  std::vector<std::vector<Element>> steps;
  for (int n = 1; n < depth; ++n) {
    const MatrixGroup& hi = groups[static_cast<std::size_t>(n)];
    const MatrixGroup& lo = groups[static_cast<std::size_t>(n - 1)];
    const std::int64_t m = ipow(p, static_cast<unsigned>(n));
    std::map<Matrix2, Element> lo_index;
    for (Element x = 0; x < lo.elements.size(); ++x) lo_index.emplace(lo.elements[x], x);
    std::vector<Element> phi;
    for (Matrix2 a : hi.elements) {
      for (auto& x : a) x = floor_mod(x, m);
      phi.push_back(lo_index.at(a));
    }
    steps.push_back(std::move(phi));
  }
  std::vector<GroupTable> levels;
  for (auto& g : groups) levels.push_back(std::move(g.table));
  return word_filtration(modular_amalgam(), GroupSystem(1, std::move(levels), std::move(steps)), std::move(images));
}

/// Z/2 * Z/2 onto D_{p^n} with the generators sent to c = (0,1) and
/// d = (1,1).
inline Filtration<ReducedWord> dihedral_word_filtration(std::int64_t p, int depth) {
  std::vector<GroupTable> levels;
  std::vector<std::vector<Element>> steps;
  std::vector<std::vector<std::vector<Element>>> images;
  for (int n = 1; n <= depth; ++n) {
    levels.push_back(dihedral_group(ipow(p, static_cast<unsigned>(n))));
    images.push_back({{0, 1}, {0, 3}});
  }
  for (int n = 1; n < depth; ++n) {
    std::vector<Element> phi;
    for (Element g = 0; g < levels[static_cast<std::size_t>(n)].order(); ++g) {
      phi.push_back(dinfty_project(dihedral_element(g), p, static_cast<unsigned>(n)));
    }
    steps.push_back(std::move(phi));
  }
  return word_filtration(infinite_dihedral_amalgam(), GroupSystem(1, std::move(levels), std::move(steps)),
                         std::move(images));
}

}  // namespace prograph
