#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prograph/dihedral.hpp"

namespace prograph::puiseux {

// ξ_{2p^n}^k t^{1/p^n} is the vertex xi_k, k mod 2p^n, with ξ = exp(iπ/p^n).
// Even exponents and odd exponents alternate around one cycle:
//   a_k = [ξ^{2k} ; ξ^{2k+1}],  b_k = [ξ^{2k+2} ; ξ^{2k+1}],  0 ≤ k < p^n.

struct PuiseuxRoot {
  std::int64_t p = 3;
  int n = 1;
  std::int64_t k = 0;  // 0 ≤ k < 2p^n

  std::int64_t modulus() const { return 2 * ipow(p, static_cast<unsigned>(n)); }
  bool operator==(const PuiseuxRoot&) const = default;
};

inline PuiseuxRoot root(std::int64_t p, int n, std::int64_t k) {
  dihedral::require({p, n});
  PuiseuxRoot r{p, n, 0};
  r.k = floor_mod(k, r.modulus());
  return r;
}

inline std::string to_string(const PuiseuxRoot& r) {
  return "xi_" + std::to_string(r.modulus()) + "^" + std::to_string(r.k) + " t^(1/" +
         std::to_string(ipow(r.p, static_cast<unsigned>(r.n))) + ")";
}

inline CellId X(std::int64_t k) { return vertex("xi", k); }
inline CellId A(std::int64_t k) { return edge("a", k); }
inline CellId B(std::int64_t k) { return edge("b", k); }

inline Graph galois_graph(std::int64_t p, int n) {
  dihedral::require({p, n});
  const std::int64_t m = ipow(p, static_cast<unsigned>(n));
  std::vector<CellId> vs;
  std::vector<EdgeSpec> es;
  for (std::int64_t k = 0; k < 2 * m; ++k) vs.push_back(X(k));
  for (std::int64_t k = 0; k < m; ++k) {
    es.push_back({A(k), X(2 * k), X(2 * k + 1)});
    es.push_back({B(k), X(floor_mod(2 * k + 2, 2 * m)), X(2 * k + 1)});
  }
  return make_graph(vs, es);
}

/// x ↦ x^p: ξ_{2p^n}^p = ξ_{2p^{n-1}}, so the exponent is read mod 2p^{n-1}.
inline GraphMorphism theta_power(std::int64_t p, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "theta_power needs n >= 2");
  GraphMorphism f{galois_graph(p, n), galois_graph(p, n - 1), {}};
  const std::int64_t lo = ipow(p, static_cast<unsigned>(n - 1));
  for (const auto& c : f.source.cells()) {
    f.map.emplace(c, CellId{c.kind, c.tag, floor_mod(c.index, c.is_vertex() ? 2 * lo : lo)});
  }
  return f;
}

enum class Generator { c, sigma };

/// σ multiplies by ξ_{p^n} = ξ_{2p^n}^2; c conjugates, negating the exponent.
inline PuiseuxRoot act_galois(Generator g, const PuiseuxRoot& r) {
  return root(r.p, r.n, g == Generator::sigma ? r.k + 2 : -r.k);
}

/// (a,b) ∈ D_{p^n} acts as σ^a c^b.
inline PuiseuxRoot act_galois(const DinftyElement& g, const PuiseuxRoot& r) {
  return root(r.p, r.n, (g.flip ? -r.k : r.k) + 2 * g.shift);
}

/// D_{p^n} acting on galois_graph(p, n); an edge goes to the edge between
/// the images of its ends, which is unique on a cycle of length ≥ 4.
inline GraphAction galois_action(std::int64_t p, int n) {
  const std::int64_t m = ipow(p, static_cast<unsigned>(n));
  GraphAction a{dihedral_group(m), galois_graph(p, n), {}};
  std::map<std::pair<CellId, CellId>, CellId> by_ends;
  for (const auto& [e, ends] : a.graph.edges()) by_ends.emplace(ends, e);
  for (Element g = 0; g < a.group.order(); ++g) {
    const DinftyElement x = dihedral_element(g);
    auto v = [&](const CellId& c) { return X(act_galois(x, root(p, n, c.index)).k); };
    CellMap map;
    for (const auto& c : a.graph.vertices()) map.emplace(c, v(c));
    for (const auto& [e, ends] : a.graph.edges()) map.emplace(e, by_ends.at({v(ends.first), v(ends.second)}));
    a.act.push_back(std::move(map));
  }
  return a;
}

struct GaloisIso {
  GraphMorphism iso;  // galois_graph -> dihedral level_graph
  int sign = 1;       // vertex exponent k goes to the dihedral vertex of sign·k + shift
  std::int64_t shift = 0;
  std::size_t candidates_tried = 0;
  CheckReport equivariance;
};

namespace detail {

// 2x ↦ P_x, 2x+1 ↦ Q_x, for 0 ≤ k.
inline CellId dihedral_vertex(std::int64_t k) { return k % 2 == 0 ? dihedral::P(k / 2) : dihedral::Q(k / 2); }

inline std::optional<GraphMorphism> candidate(std::int64_t p, int n, int sign, std::int64_t shift) {
  const std::int64_t m = ipow(p, static_cast<unsigned>(n));
  GraphMorphism f{galois_graph(p, n), dihedral::level_graph({p, n}), {}};
  for (const auto& v : f.source.vertices()) {
    f.map.emplace(v, dihedral_vertex(floor_mod(sign * v.index + shift, 2 * m)));
  }
  std::map<std::pair<CellId, CellId>, CellId> by_ends;
  for (const auto& [e, ends] : f.target.edges()) by_ends.emplace(ends, e);
  for (const auto& [e, ends] : f.source.edges()) {
    auto it = by_ends.find({f.map.at(ends.first), f.map.at(ends.second)});
    if (it == by_ends.end()) return std::nullopt;  // orientation reversed
    f.map.emplace(e, it->second);
  }
  return f;
}

inline CheckReport conjugation_report(const GraphMorphism& f, const GraphAction& src, const GraphAction& dst) {
  CheckReport rep;
  for (Element g = 0; g < src.group.order(); ++g) {
    for (const auto& c : src.graph.cells()) {
      if (f(src.apply(g, c)) != dst.apply(g, f(c))) {
        rep.violations.push_back(src.group.label(g) + " . " + prograph::to_string(c));
      }
    }
  }
  return rep;
}

}  // namespace detail

/// Searches the 4p^n symmetries of the cycle, the identity candidate first,
/// for an isomorphism carrying galois_action to the dihedral action table
/// with c ↔ (0,1) and σ ↔ (1,0).
inline GaloisIso iso_to_dihedral(std::int64_t p, int n) {
  const std::int64_t m = ipow(p, static_cast<unsigned>(n));
  const GraphAction src = galois_action(p, n);
  const GraphAction dst = dihedral::action_table({p, n});
  GaloisIso out;
  for (int sign : {1, -1}) {
    for (std::int64_t shift = 0; shift < 2 * m; ++shift) {
      ++out.candidates_tried;
      auto f = detail::candidate(p, n, sign, shift);
      if (!f || !check_morphism(*f).is_morphism) continue;
      auto rep = detail::conjugation_report(*f, src, dst);
      if (!rep.valid()) continue;
      out.iso = std::move(*f);
      out.sign = sign;
      out.shift = shift;
      out.equivariance = std::move(rep);
      return out;
    }
  }
  throw Error(ErrorCode::NoEquivariantIso, "no cycle symmetry conjugates the Galois action at p=" +
                                               std::to_string(p) + ", n=" + std::to_string(n));
}

/// θ_{n,n-1} ∘ f_n = f_{n-1} ∘ theta_power on every cell.
inline CheckReport theta_square(std::int64_t p, int n) {
  CheckReport rep;
  const GraphMorphism hi = iso_to_dihedral(p, n).iso;
  const GraphMorphism lo = iso_to_dihedral(p, n - 1).iso;
  const GraphMorphism tp = theta_power(p, n);
  const GraphMorphism td = dihedral::theta_mn({p, n}, {p, n - 1});
  for (const auto& c : tp.source.cells()) {
    if (td(hi(c)) != lo(tp(c))) rep.violations.push_back(prograph::to_string(c));
  }
  return rep;
}

}  // namespace prograph::puiseux
