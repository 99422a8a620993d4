#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prograph/action.hpp"
#include "prograph/graph.hpp"
#include "prograph/group.hpp"

namespace prograph {

struct Letter {
  std::size_t factor = 0;
  Element element = 0;

  auto operator<=>(const Letter&) const = default;
  bool operator==(const Letter&) const = default;
};

/// Normal form c_1 ... c_k a: each c_j a non-trivial coset representative of
/// the base image in its factor, consecutive factors distinct, a in the base.
struct ReducedWord {
  std::vector<Letter> letters;
  Element tail = 0;

  std::size_t length() const noexcept { return letters.size(); }
  auto operator<=>(const ReducedWord&) const = default;
  bool operator==(const ReducedWord&) const = default;
};

class AmalgamPresentation {
 public:
  AmalgamPresentation(std::vector<GroupTable> factors, GroupTable base,
                      std::vector<std::vector<Element>> embeddings)
      : factors_(std::move(factors)), base_(std::move(base)), embeddings_(std::move(embeddings)) {
    if (factors_.size() < 2) throw Error(ErrorCode::InvalidInput, "need at least two factors");
    if (embeddings_.size() != factors_.size()) {
      throw Error(ErrorCode::InvalidInput, "one embedding per factor required");
    }
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      auto rep = check_homomorphism(base_, factors_[i], embeddings_[i]);
      std::set<Element> image(embeddings_[i].begin(), embeddings_[i].end());
      if (!rep.is_homomorphism || image.size() != base_.order()) {
        throw Error(ErrorCode::InvalidGroup, "embedding " + std::to_string(i) + " is not injective");
      }
      build_transversal(i);
    }
  }

  const std::vector<GroupTable>& factors() const noexcept { return factors_; }
  const GroupTable& base() const noexcept { return base_; }
  const std::vector<std::vector<Element>>& embeddings() const noexcept { return embeddings_; }

  /// Coset representative of g A_i; the identity for A_i itself, otherwise
  /// the minimal element index of the coset.
  Element representative(std::size_t i, Element g) const { return cosets_.at(i).rep.at(g); }
  const std::vector<Element>& representatives(std::size_t i) const { return cosets_.at(i).reps; }

  ReducedWord identity() const { return {{}, base_.identity()}; }

  /// w . g for a single factor element.
  void push(ReducedWord& w, const Letter& l) const {
    if (l.factor >= factors_.size()) {
      throw Error(ErrorCode::UnknownFactor, "factor " + std::to_string(l.factor));
    }
    const GroupTable& f = factors_[l.factor];
    if (l.element >= f.order()) throw Error(ErrorCode::InvalidInput, "element out of range");
    Element x = f.mul(embeddings_[l.factor][w.tail], l.element);
    if (!w.letters.empty() && w.letters.back().factor == l.factor) {
      x = f.mul(w.letters.back().element, x);
      w.letters.pop_back();
    }
    const Element c = representative(l.factor, x);
    w.tail = cosets_[l.factor].base_of.at(f.mul(f.inv(c), x));
    if (c != f.identity()) w.letters.push_back({l.factor, c});
  }

  ReducedWord reduce(const std::vector<Letter>& raw) const {
    ReducedWord w = identity();
    for (const auto& l : raw) push(w, l);
    return w;
  }

  std::vector<Letter> expand(const ReducedWord& w) const {
    std::vector<Letter> out = w.letters;
    if (w.tail != base_.identity()) out.push_back({0, embeddings_[0][w.tail]});
    return out;
  }

  ReducedWord multiply(const ReducedWord& a, const ReducedWord& b) const {
    ReducedWord w = a;
    for (const auto& l : expand(b)) push(w, l);
    return w;
  }

  ReducedWord inverse(const ReducedWord& w) const {
    std::vector<Letter> raw;
    auto letters = expand(w);
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      raw.push_back({it->factor, factors_[it->factor].inv(it->element)});
    }
    return reduce(raw);
  }

  /// All reduced words of length <= max_length in (length, letters, tail)
  /// order.
  std::vector<ReducedWord> enumerate(std::size_t max_length) const {
    std::vector<ReducedWord> out;
    for (const auto& seq : coset_sequences(max_length)) {
      for (Element a = 0; a < base_.order(); ++a) out.push_back({seq, a});
    }
    return out;
  }

  /// Alternating sequences of non-trivial representatives, length <= max,
  /// in (length, lexicographic) order.
  std::vector<std::vector<Letter>> coset_sequences(std::size_t max_length) const {
    std::vector<std::vector<Letter>> out{{}};
    std::vector<std::vector<Letter>> layer{{}};
    for (std::size_t len = 1; len <= max_length; ++len) {
      std::vector<std::vector<Letter>> next;
      for (const auto& seq : layer) {
        for (std::size_t i = 0; i < factors_.size(); ++i) {
          if (!seq.empty() && seq.back().factor == i) continue;
          for (Element c : cosets_[i].reps) {
            if (c == factors_[i].identity()) continue;
            auto s = seq;
            s.push_back({i, c});
            next.push_back(std::move(s));
          }
        }
      }
      std::sort(next.begin(), next.end());
      out.insert(out.end(), next.begin(), next.end());
      layer = std::move(next);
    }
    return out;
  }

  std::string to_string(const ReducedWord& w) const {
    std::string s;
    for (const auto& l : w.letters) {
      s += "g" + std::to_string(l.factor + 1) + "[" + factors_[l.factor].label(l.element) + "]";
    }
    return s + "a[" + base_.label(w.tail) + "]";
  }

 private:
  struct Transversal {
    std::vector<Element> rep;              // element -> coset representative
    std::vector<Element> reps;             // sorted representatives
    std::map<Element, Element> base_of;    // factor element in A_i -> base element
  };

  void build_transversal(std::size_t i) {
    const GroupTable& f = factors_[i];
    Transversal t;
    t.rep.assign(f.order(), f.order());
    for (Element a = 0; a < base_.order(); ++a) t.base_of.emplace(embeddings_[i][a], a);
    std::vector<Element> order;
    order.push_back(f.identity());
    for (Element g = 0; g < f.order(); ++g) {
      if (g != f.identity()) order.push_back(g);
    }
    for (Element g : order) {
      if (t.rep[g] != f.order()) continue;
      for (Element a = 0; a < base_.order(); ++a) t.rep[f.mul(g, embeddings_[i][a])] = g;
      t.reps.push_back(g);
    }
    std::sort(t.reps.begin(), t.reps.end());
    cosets_.push_back(std::move(t));
  }

  std::vector<GroupTable> factors_;
  GroupTable base_;
  std::vector<std::vector<Element>> embeddings_;
  std::vector<Transversal> cosets_;
};

inline ReducedWord reduce_word(const AmalgamPresentation& p, const std::vector<Letter>& raw) {
  return p.reduce(raw);
}

// ---------------------------------------------------------------------------
// Bass-Serre tree of a two-factor amalgam, truncated by coset word length

/// Vertices are cosets wG_1 (tag "G1") and wG_2 (tag "G2"), edges are cosets
/// wA (tag "A") oriented from wG_1 to wG_2.  A coset is named by its
/// representative letter sequence; the index is that sequence's rank in
/// (length, lexicographic) order, so labels agree across radii.
class BassSerreBall {
 public:
  BassSerreBall(const AmalgamPresentation& p, std::size_t radius) : p_(p), radius_(radius) {
    if (p.factors().size() != 2) {
      throw Error(ErrorCode::UnsupportedFactorCount, "tree layout needs exactly two factors");
    }
    std::map<std::string, std::int64_t> next{{"G1", 0}, {"G2", 0}, {"A", 0}};
    for (const auto& seq : p.coset_sequences(radius)) {
      name(seq, "A", next);
      for (std::size_t i = 0; i < 2; ++i) {
        if (seq.empty() || seq.back().factor != i) name(seq, i == 0 ? "G1" : "G2", next);
      }
    }
    std::vector<CellId> vs;
    std::vector<EdgeSpec> es;
    for (const auto& [key, id] : ids_) {
      if (id.is_vertex()) {
        vs.push_back(id);
      } else {
        es.push_back({id, ids_.at(coset_key(key.second, 0)), ids_.at(coset_key(key.second, 1))});
      }
    }
    graph_ = make_graph(vs, es);
  }

  const Graph& graph() const noexcept { return graph_; }
  std::size_t radius() const noexcept { return radius_; }

  /// Coset w K for K = G_1 (0), G_2 (1) or A (2).
  std::optional<CellId> cell_of(const ReducedWord& w, std::size_t kind) const {
    auto it = ids_.find(coset_key(w.letters, kind));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<Letter>& sequence_of(const CellId& c) const { return seqs_.at(c); }

  /// g . c, or nothing when the image lies outside the ball.
  std::optional<CellId> apply(const ReducedWord& g, const CellId& c) const {
    const auto& seq = seqs_.at(c);
    ReducedWord w = p_.multiply(g, ReducedWord{seq, p_.base().identity()});
    return cell_of(w, kind_of(c));
  }

  ActionMaps action_maps(const std::vector<ReducedWord>& words) const {
    ActionMaps maps;
    for (const auto& g : words) {
      CellMap m;
      for (const auto& c : graph_.cells()) {
        if (auto img = apply(g, c)) m.emplace(c, *img);
      }
      maps.push_back(std::move(m));
    }
    return maps;
  }

  static std::size_t kind_of(const CellId& c) {
    return c.tag == "G1" ? 0 : c.tag == "G2" ? 1 : 2;
  }

 private:
  using Key = std::pair<std::size_t, std::vector<Letter>>;

  static Key coset_key(std::vector<Letter> seq, std::size_t kind) {
    if (kind < 2 && !seq.empty() && seq.back().factor == kind) seq.pop_back();
    return {kind, std::move(seq)};
  }

  void name(const std::vector<Letter>& seq, const std::string& tag,
            std::map<std::string, std::int64_t>& next) {
    const std::size_t kind = tag == "G1" ? 0 : tag == "G2" ? 1 : 2;
    CellId id{kind == 2 ? CellKind::Edge : CellKind::Vertex, tag, next[tag]++};
    ids_.emplace(Key{kind, seq}, id);
    seqs_.emplace(id, seq);
  }

  AmalgamPresentation p_;
  std::size_t radius_;
  std::map<Key, CellId> ids_;
  std::map<CellId, std::vector<Letter>> seqs_;
  Graph graph_;
};

inline BassSerreBall bass_serre_ball(const AmalgamPresentation& p, std::size_t radius) {
  return BassSerreBall(p, radius);
}

// ---------------------------------------------------------------------------
// D_inf = Z x| Z/2

struct DinftyElement {
  std::int64_t shift = 0;
  int flip = 0;

  DinftyElement operator*(const DinftyElement& o) const {
    return {shift + (flip ? -o.shift : o.shift), flip ^ o.flip};
  }
  DinftyElement inverse() const { return {flip ? shift : -shift, flip}; }

  auto operator<=>(const DinftyElement&) const = default;
  bool operator==(const DinftyElement&) const = default;
};

inline std::string to_string(const DinftyElement& x) {
  return "(" + std::to_string(x.shift) + "," + std::to_string(x.flip) + ")";
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

inline std::int64_t ipow(std::int64_t b, unsigned e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// D_m as a table: element 2x + b is (x, b) with x in [0, m).
inline GroupTable dihedral_group(std::int64_t m) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "modulus must be positive");
  std::vector<std::string> labels;
  for (std::int64_t x = 0; x < m; ++x) {
    labels.push_back(to_string(DinftyElement{x, 0}));
    labels.push_back(to_string(DinftyElement{x, 1}));
  }
  std::vector<Element> gens{1};
  if (m > 1) gens.push_back(2);
  return make_group(
      labels,
      [m](Element u, Element v) {
        DinftyElement a{static_cast<std::int64_t>(u / 2), static_cast<int>(u % 2)};
        DinftyElement b{static_cast<std::int64_t>(v / 2), static_cast<int>(v % 2)};
        DinftyElement c = a * b;
        return static_cast<Element>(2 * floor_mod(c.shift, m) + c.flip);
      },
      gens);
}

inline Element dinfty_project(const DinftyElement& x, std::int64_t p, unsigned n) {
  return static_cast<Element>(2 * floor_mod(x.shift, ipow(p, n)) + x.flip);
}

inline DinftyElement dihedral_element(Element e) {
  return {static_cast<std::int64_t>(e / 2), static_cast<int>(e % 2)};
}

/// Fixed enumeration (0,0),(0,1),(1,0),(1,1),(-1,0),(-1,1),(2,0),...
inline DinftyElement dinfty_at(std::size_t k) {
  const std::size_t j = k / 2;
  const std::int64_t x = j == 0 ? 0 : (j % 2 == 1 ? static_cast<std::int64_t>((j + 1) / 2)
                                                  : -static_cast<std::int64_t>(j / 2));
  return {x, static_cast<int>(k % 2)};
}

inline std::size_t dinfty_position(const DinftyElement& x) {
  const std::size_t j = x.shift > 0 ? static_cast<std::size_t>(2 * x.shift - 1)
                                    : static_cast<std::size_t>(-2 * x.shift);
  return 2 * j + static_cast<std::size_t>(x.flip);
}

/// Z/2 *_1 Z/2 with factor generators standing for c = (0,1) and
/// d = (1,1).
inline AmalgamPresentation infinite_dihedral_amalgam() {
  return AmalgamPresentation({cyclic_group(2), cyclic_group(2)}, trivial_group(), {{0}, {0}});
}

/// Z/4 *_{Z/2} Z/6.
inline AmalgamPresentation modular_amalgam() {
  return AmalgamPresentation({cyclic_group(4), cyclic_group(6)}, cyclic_group(2), {{0, 2}, {0, 3}});
}

}  // namespace prograph
