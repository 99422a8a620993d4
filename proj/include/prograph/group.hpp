#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "prograph/error.hpp"

namespace prograph {

using Element = std::size_t;

/// Finite group given by an explicit multiplication table.  Elements are
/// indices into `labels`; the table is validated exhaustively on
/// construction (closure, associativity, identity, inverses, generation).
class GroupTable {
 public:
  GroupTable() : GroupTable({"e"}, {{0}}, {}) {}

  GroupTable(std::vector<std::string> labels, std::vector<std::vector<Element>> mult,
             std::vector<Element> generators)
      : labels_(std::move(labels)), mult_(std::move(mult)), generators_(std::move(generators)) {
    validate();
  }

  std::size_t order() const noexcept { return labels_.size(); }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const { return mult_[a][b]; }
  Element inv(Element a) const { return inverse_[a]; }
  const std::vector<Element>& generators() const noexcept { return generators_; }
  const std::string& label(Element a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<Element>>& table() const noexcept { return mult_; }

  Element find(const std::string& label) const {
    auto it = by_label_.find(label);
    if (it == by_label_.end()) throw Error(ErrorCode::InvalidGroup, "no element " + label);
    return it->second;
  }

  Element power(Element a, long long k) const {
    Element base = k < 0 ? inv(a) : a;
    Element acc = identity_;
    for (long long i = 0; i < (k < 0 ? -k : k); ++i) acc = mul(acc, base);
    return acc;
  }

  std::size_t element_order(Element a) const {
    std::size_t n = 1;
    for (Element x = a; x != identity_; x = mul(x, a)) ++n;
    return n;
  }

  /// Closure of a generating set (including the identity).
  std::set<Element> generated(const std::vector<Element>& gens) const {
    std::set<Element> seen{identity_};
    std::vector<Element> frontier{identity_};
    while (!frontier.empty()) {
      std::vector<Element> next;
      for (Element x : frontier) {
        for (Element g : gens) {
          Element y = mul(x, g);
          if (seen.insert(y).second) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
    return seen;
  }

 private:
  void validate() {
    const std::size_t n = labels_.size();
    if (n == 0) throw Error(ErrorCode::InvalidGroup, "empty element list");
    if (mult_.size() != n) throw Error(ErrorCode::InvalidGroup, "table has wrong row count");
    for (std::size_t i = 0; i < n; ++i) {
      if (!by_label_.emplace(labels_[i], i).second) {
        throw Error(ErrorCode::InvalidGroup, "duplicate label " + labels_[i]);
      }
      if (mult_[i].size() != n) throw Error(ErrorCode::InvalidGroup, "ragged table");
      for (Element x : mult_[i]) {
        if (x >= n) throw Error(ErrorCode::InvalidGroup, "table not closed");
      }
    }
    bool found = false;
    for (Element e = 0; e < n && !found; ++e) {
      bool ok = true;
      for (Element x = 0; x < n && ok; ++x) ok = mult_[e][x] == x && mult_[x][e] == x;
      if (ok) {
        identity_ = e;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InvalidGroup, "no identity");
    inverse_.assign(n, n);
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (mult_[a][b] == identity_ && mult_[b][a] == identity_) inverse_[a] = b;
      }
      if (inverse_[a] == n) throw Error(ErrorCode::InvalidGroup, "no inverse for " + labels_[a]);
    }
    for (Element g : generators_) {
      if (g >= n) throw Error(ErrorCode::InvalidGroup, "generator out of range");
    }
    if (generated(generators_).size() != n) {
      throw Error(ErrorCode::InvalidGroup, "generators do not generate the group");
    }
    // Light's test: associativity on (x, g, y) for g in a generating set
    // implies it everywhere.
    for (Element g : generators_) {
      for (Element x = 0; x < n; ++x) {
        const Element xg = mult_[x][g];
        for (Element y = 0; y < n; ++y) {
          if (mult_[xg][y] != mult_[x][mult_[g][y]]) {
            throw Error(ErrorCode::InvalidGroup, "not associative");
          }
        }
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<Element>> mult_;
  std::vector<Element> generators_;
  std::vector<Element> inverse_;
  std::map<std::string, Element> by_label_;
  Element identity_ = 0;
};

/// Builds a table from a callback multiplication.
template <class Mul>
GroupTable make_group(std::vector<std::string> labels, Mul&& mul, std::vector<Element> generators) {
  const std::size_t n = labels.size();
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) t[a][b] = mul(a, b);
  }
  return GroupTable(std::move(labels), std::move(t), std::move(generators));
}

inline GroupTable trivial_group() { return GroupTable(); }

inline GroupTable cyclic_group(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return make_group(
      labels, [n](Element a, Element b) { return (a + b) % n; },
      n > 1 ? std::vector<Element>{1} : std::vector<Element>{});
}

/// Subgroup as a member set.  Validity (identity, closure, inverses) is
/// checked on construction; normality is computed.
class Subgroup {
 public:
  Subgroup(const GroupTable& parent, std::set<Element> members)
      : members_(std::move(members)) {
    if (!members_.count(parent.identity())) {
      throw Error(ErrorCode::NotSubgroup, "identity missing");
    }
    for (Element a : members_) {
      if (a >= parent.order()) throw Error(ErrorCode::NotSubgroup, "element out of range");
      if (!members_.count(parent.inv(a))) throw Error(ErrorCode::NotSubgroup, "not closed under inverse");
      for (Element b : members_) {
        if (!members_.count(parent.mul(a, b))) {
          throw Error(ErrorCode::NotSubgroup, "not closed under multiplication");
        }
      }
    }
    normal_ = true;
    for (Element g = 0; g < parent.order() && normal_; ++g) {
      for (Element h : members_) {
        if (!members_.count(parent.mul(parent.mul(g, h), parent.inv(g)))) {
          normal_ = false;
          break;
        }
      }
    }
  }

  static Subgroup whole(const GroupTable& g) {
    std::set<Element> all;
    for (Element a = 0; a < g.order(); ++a) all.insert(a);
    return Subgroup(g, std::move(all));
  }

  static Subgroup generated_by(const GroupTable& g, const std::vector<Element>& gens) {
    return Subgroup(g, g.generated(gens));
  }

  const std::set<Element>& members() const noexcept { return members_; }
  std::size_t order() const noexcept { return members_.size(); }
  bool contains(Element a) const { return members_.count(a) > 0; }
  bool is_normal() const noexcept { return normal_; }

 private:
  std::set<Element> members_;
  bool normal_ = false;
};

/// Whether `map` (indexed by source element) is a homomorphism; and whether
/// it is onto.
struct HomomorphismReport {
  bool is_homomorphism = true;
  bool is_surjective = true;
  std::vector<std::string> violations;
};

inline HomomorphismReport check_homomorphism(const GroupTable& src, const GroupTable& dst,
                                             const std::vector<Element>& map) {
  HomomorphismReport rep;
  if (map.size() != src.order()) {
    rep.is_homomorphism = false;
    rep.violations.push_back("map is not total");
    return rep;
  }
  for (Element a = 0; a < src.order(); ++a) {
    for (Element b = 0; b < src.order(); ++b) {
      if (map[src.mul(a, b)] != dst.mul(map[a], map[b])) {
        rep.is_homomorphism = false;
        rep.violations.push_back("f(" + src.label(a) + "*" + src.label(b) + ") mismatch");
        if (rep.violations.size() > 16) return rep;
      }
    }
  }
  std::set<Element> image(map.begin(), map.end());
  rep.is_surjective = image.size() == dst.order();
  if (!rep.is_surjective) rep.violations.push_back("not surjective");
  return rep;
}

}  // namespace prograph
