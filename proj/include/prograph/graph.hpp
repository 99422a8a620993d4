#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prograph/cell.hpp"
#include "prograph/error.hpp"
#include "prograph/union_find.hpp"

namespace prograph {

struct EdgeSpec {
  CellId id;
  CellId origin;
  CellId terminus;
};

/// Finite oriented graph.  Cells are kept in canonical label order, so every
/// traversal below is deterministic.
class Graph {
 public:
  Graph() = default;

  const std::set<CellId>& vertices() const noexcept { return vertices_; }
  const std::map<CellId, std::pair<CellId, CellId>>& edges() const noexcept {
    return edges_;
  }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return vertices_.empty() && edges_.empty(); }

  bool contains(const CellId& c) const {
    return c.is_vertex() ? vertices_.count(c) > 0 : edges_.count(c) > 0;
  }

  const CellId& origin(const CellId& e) const { return endpoints(e).first; }
  const CellId& terminus(const CellId& e) const { return endpoints(e).second; }

  const std::pair<CellId, CellId>& endpoints(const CellId& e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw Error(ErrorCode::UnknownEdge, to_string(e));
    return it->second;
  }

  /// All cells, vertices first, each block in canonical order.
  std::vector<CellId> cells() const {
    std::vector<CellId> out(vertices_.begin(), vertices_.end());
    for (const auto& [e, ends] : edges_) out.push_back(e);
    return out;
  }

  std::size_t num_cells() const noexcept { return vertices_.size() + edges_.size(); }

  /// Undirected neighbourhood: (edge, other endpoint) pairs in edge order.
  std::vector<std::pair<CellId, CellId>> incident(const CellId& v) const {
    std::vector<std::pair<CellId, CellId>> out;
    for (const auto& [e, ends] : edges_) {
      if (ends.first == v) out.emplace_back(e, ends.second);
      if (ends.second == v && ends.first != v) out.emplace_back(e, ends.first);
    }
    return out;
  }

  bool operator==(const Graph&) const = default;

  friend Graph make_graph(const std::vector<CellId>&, const std::vector<EdgeSpec>&);

 private:
  std::set<CellId> vertices_;
  std::map<CellId, std::pair<CellId, CellId>> edges_;
};

inline Graph make_graph(const std::vector<CellId>& vertices,
                        const std::vector<EdgeSpec>& edges) {
  Graph g;
  for (const auto& v : vertices) {
    if (!v.is_vertex()) {
      throw Error(ErrorCode::InvalidInput, "edge label in vertex list: " + to_string(v));
    }
    if (!g.vertices_.insert(v).second) {
      throw Error(ErrorCode::DuplicateLabel, to_string(v));
    }
  }
  for (const auto& e : edges) {
    if (!e.id.is_edge()) {
      throw Error(ErrorCode::InvalidInput, "vertex label in edge list: " + to_string(e.id));
    }
    if (!g.vertices_.count(e.origin) || !g.vertices_.count(e.terminus)) {
      throw Error(ErrorCode::DanglingEndpoint, to_string(e.id));
    }
    if (!g.edges_.emplace(e.id, std::make_pair(e.origin, e.terminus)).second) {
      throw Error(ErrorCode::DuplicateLabel, to_string(e.id));
    }
  }
  return g;
}

/// Induced subgraph on a vertex subset (edges kept when both ends survive).
inline Graph induced_subgraph(const Graph& g, const std::set<CellId>& keep) {
  std::vector<CellId> vs;
  for (const auto& v : g.vertices()) {
    if (keep.count(v)) vs.push_back(v);
  }
  std::vector<EdgeSpec> es;
  for (const auto& [e, ends] : g.edges()) {
    if (keep.count(ends.first) && keep.count(ends.second)) {
      es.push_back({e, ends.first, ends.second});
    }
  }
  return make_graph(vs, es);
}

/// Subgraph spanned by an arbitrary cell set; endpoints of listed edges are
/// added automatically.
inline Graph subgraph_of_cells(const Graph& g, const std::set<CellId>& cells) {
  std::set<CellId> vs;
  std::vector<EdgeSpec> es;
  for (const auto& c : cells) {
    if (!g.contains(c)) throw Error(ErrorCode::UnknownCell, to_string(c));
    if (c.is_vertex()) {
      vs.insert(c);
    } else {
      const auto& [o, t] = g.endpoints(c);
      vs.insert(o);
      vs.insert(t);
      es.push_back({c, o, t});
    }
  }
  return make_graph(std::vector<CellId>(vs.begin(), vs.end()), es);
}

inline std::size_t count_components(const Graph& g) {
  std::map<CellId, std::size_t> idx;
  for (const auto& v : g.vertices()) idx.emplace(v, idx.size());
  DisjointSet ds(idx.size());
  std::size_t comps = idx.size();
  for (const auto& [e, ends] : g.edges()) {
    if (ds.unite(idx.at(ends.first), idx.at(ends.second))) --comps;
  }
  return comps;
}

inline bool is_connected(const Graph& g) {
  return g.num_vertices() > 0 && count_components(g) == 1;
}

/// Tree test on the underlying undirected graph.  The empty graph is not a
/// tree.
inline bool is_tree(const Graph& g) {
  if (g.num_vertices() == 0) return false;
  if (g.num_edges() + 1 != g.num_vertices()) return false;
  return is_connected(g);
}

/// Returns an undirected cycle as an edge list, or nothing when g is a forest.
inline std::optional<std::vector<CellId>> find_cycle(const Graph& g) {
  std::map<CellId, std::size_t> idx;
  for (const auto& v : g.vertices()) idx.emplace(v, idx.size());
  DisjointSet ds(idx.size());
  std::vector<EdgeSpec> forest;
  for (const auto& [e, ends] : g.edges()) {
    if (!ds.unite(idx.at(ends.first), idx.at(ends.second))) {
      // Close the cycle through the forest built so far.
      std::map<CellId, std::vector<std::pair<CellId, CellId>>> adj;
      for (const auto& f : forest) {
        adj[f.origin].emplace_back(f.id, f.terminus);
        adj[f.terminus].emplace_back(f.id, f.origin);
      }
      std::map<CellId, std::pair<CellId, CellId>> parent;  // vertex -> (edge, prev)
      std::deque<CellId> queue{ends.first};
      std::set<CellId> seen{ends.first};
      while (!queue.empty()) {
        CellId u = queue.front();
        queue.pop_front();
        for (const auto& [fe, w] : adj[u]) {
          if (seen.insert(w).second) {
            parent[w] = {fe, u};
            queue.push_back(w);
          }
        }
      }
      std::vector<CellId> cycle{e};
      for (CellId cur = ends.second; cur != ends.first;) {
        const auto& [fe, prev] = parent.at(cur);
        cycle.push_back(fe);
        cur = prev;
      }
      return cycle;
    }
    forest.push_back({e, ends.first, ends.second});
  }
  return std::nullopt;
}

/// Undirected BFS distances from a vertex.
inline std::map<CellId, std::size_t> distances_from(const Graph& g, const CellId& center) {
  if (!center.is_vertex() || !g.vertices().count(center)) {
    throw Error(ErrorCode::UnknownVertex, to_string(center));
  }
  std::map<CellId, std::vector<CellId>> adj;
  for (const auto& [e, ends] : g.edges()) {
    adj[ends.first].push_back(ends.second);
    adj[ends.second].push_back(ends.first);
  }
  std::map<CellId, std::size_t> dist{{center, 0}};
  std::deque<CellId> queue{center};
  while (!queue.empty()) {
    CellId u = queue.front();
    queue.pop_front();
    for (const auto& w : adj[u]) {
      if (dist.emplace(w, dist.at(u) + 1).second) queue.push_back(w);
    }
  }
  return dist;
}

inline Graph ball(const Graph& g, const CellId& center, std::size_t radius) {
  std::set<CellId> keep;
  for (const auto& [v, d] : distances_from(g, center)) {
    if (d <= radius) keep.insert(v);
  }
  return induced_subgraph(g, keep);
}

inline std::string export_dot(const Graph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (const auto& v : g.vertices()) os << "  \"" << to_string(v) << "\";\n";
  for (const auto& [e, ends] : g.edges()) {
    os << "  \"" << to_string(ends.first) << "\" -> \"" << to_string(ends.second)
       << "\" [label=\"" << to_string(e) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Morphisms

struct GraphMorphism {
  Graph source;
  Graph target;
  CellMap map;

  const CellId& operator()(const CellId& c) const {
    auto it = map.find(c);
    if (it == map.end()) throw Error(ErrorCode::PartialMap, to_string(c));
    return it->second;
  }
};

struct MorphismReport {
  bool is_morphism = true;
  bool is_surjective = true;
  std::vector<std::string> violations;
};

inline GraphMorphism identity_morphism(const Graph& g) {
  GraphMorphism f{g, g, {}};
  for (const auto& c : g.cells()) f.map.emplace(c, c);
  return f;
}

/// Endpoint commutation and surjectivity.  Throws PartialMap when a source
/// cell is unmapped; every other defect is reported.
inline MorphismReport check_morphism(const GraphMorphism& f) {
  MorphismReport rep;
  for (const auto& c : f.source.cells()) {
    if (!f.map.count(c)) throw Error(ErrorCode::PartialMap, to_string(c));
  }
  for (const auto& c : f.source.cells()) {
    const CellId& img = f.map.at(c);
    if (img.kind != c.kind || !f.target.contains(img)) {
      rep.is_morphism = false;
      rep.violations.push_back(to_string(c) + " maps outside the target or changes kind");
    }
  }
  if (rep.is_morphism) {
    for (const auto& [e, ends] : f.source.edges()) {
      const CellId& fe = f.map.at(e);
      if (f.target.origin(fe) != f.map.at(ends.first)) {
        rep.is_morphism = false;
        rep.violations.push_back("origin of " + to_string(e) + " does not commute");
      }
      if (f.target.terminus(fe) != f.map.at(ends.second)) {
        rep.is_morphism = false;
        rep.violations.push_back("terminus of " + to_string(e) + " does not commute");
      }
    }
  }
  std::set<CellId> image;
  for (const auto& [c, img] : f.map) {
    if (f.source.contains(c)) image.insert(img);
  }
  for (const auto& c : f.target.cells()) {
    if (!image.count(c)) {
      rep.is_surjective = false;
      rep.violations.push_back(to_string(c) + " not in the image");
      break;
    }
  }
  return rep;
}

/// g ∘ f
inline GraphMorphism compose(const GraphMorphism& g, const GraphMorphism& f) {
  GraphMorphism h{f.source, g.target, {}};
  for (const auto& [c, img] : f.map) h.map.emplace(c, g(img));
  return h;
}

// ---------------------------------------------------------------------------
// Isomorphism search (backtracking; desk-scale graphs only)

namespace detail {

struct IsoState {
  const Graph& a;
  const Graph& b;
  std::vector<CellId> order;
  std::map<CellId, CellId> fwd;
  std::set<CellId> used;
  std::map<std::pair<CellId, CellId>, int> mult_a, mult_b;
  std::map<CellId, std::pair<int, int>> deg_a, deg_b;

  IsoState(const Graph& ga, const Graph& gb) : a(ga), b(gb) {
    for (const auto& [e, ends] : a.edges()) {
      ++mult_a[ends];
      ++deg_a[ends.first].first;
      ++deg_a[ends.second].second;
    }
    for (const auto& [e, ends] : b.edges()) {
      ++mult_b[ends];
      ++deg_b[ends.first].first;
      ++deg_b[ends.second].second;
    }
  }

  int ma(const CellId& x, const CellId& y) const {
    auto it = mult_a.find({x, y});
    return it == mult_a.end() ? 0 : it->second;
  }
  int mb(const CellId& x, const CellId& y) const {
    auto it = mult_b.find({x, y});
    return it == mult_b.end() ? 0 : it->second;
  }

  static std::pair<int, int> degree(const std::map<CellId, std::pair<int, int>>& d,
                                    const CellId& x) {
    auto it = d.find(x);
    return it == d.end() ? std::pair{0, 0} : it->second;
  }

  bool consistent(const CellId& u, const CellId& v) const {
    if (degree(deg_a, u) != degree(deg_b, v)) return false;
    if (ma(u, u) != mb(v, v)) return false;
    for (const auto& [x, y] : fwd) {
      if (ma(u, x) != mb(v, y) || ma(x, u) != mb(y, v)) return false;
    }
    return true;
  }

  bool search(std::size_t pos) {
    if (pos == order.size()) return true;
    const CellId& u = order[pos];
    for (const auto& v : b.vertices()) {
      if (used.count(v) || !consistent(u, v)) continue;
      fwd.emplace(u, v);
      used.insert(v);
      if (search(pos + 1)) return true;
      fwd.erase(u);
      used.erase(v);
    }
    return false;
  }
};

}  // namespace detail

/// Finds a label bijection that is an oriented-graph isomorphism.  Vertices
/// are tried in BFS order so each new vertex is constrained by an assigned
/// neighbour.
inline std::optional<CellMap> find_isomorphism(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) {
    return std::nullopt;
  }
  detail::IsoState st(a, b);
  std::set<CellId> seen;
  for (const auto& root : a.vertices()) {
    if (seen.count(root)) continue;
    std::deque<CellId> queue{root};
    seen.insert(root);
    while (!queue.empty()) {
      CellId u = queue.front();
      queue.pop_front();
      st.order.push_back(u);
      for (const auto& [e, w] : a.incident(u)) {
        if (seen.insert(w).second) queue.push_back(w);
      }
    }
  }
  if (!st.search(0)) return std::nullopt;
  CellMap out = st.fwd;
  // Parallel edges are matched in canonical order within each endpoint pair.
  std::map<std::pair<CellId, CellId>, std::vector<CellId>> bucket_b;
  for (const auto& [e, ends] : b.edges()) bucket_b[ends].push_back(e);
  std::map<std::pair<CellId, CellId>, std::size_t> taken;
  for (const auto& [e, ends] : a.edges()) {
    std::pair<CellId, CellId> key{st.fwd.at(ends.first), st.fwd.at(ends.second)};
    out.emplace(e, bucket_b.at(key).at(taken[key]++));
  }
  return out;
}

inline bool is_isomorphic(const Graph& a, const Graph& b) {
  return find_isomorphism(a, b).has_value();
}

}  // namespace prograph
