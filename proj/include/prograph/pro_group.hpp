#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prograph/coherence.hpp"
#include "prograph/group.hpp"

namespace prograph {

/// Levels first..top of finite groups with step epimorphisms; step(n) maps
/// G_{n+1} onto G_n.
class GroupSystem {
 public:
  GroupSystem() = default;
  GroupSystem(int first_level, std::vector<GroupTable> levels, std::vector<std::vector<Element>> steps)
      : first_(first_level), levels_(std::move(levels)), steps_(std::move(steps)) {
    if (levels_.empty()) throw Error(ErrorCode::InvalidInput, "group system needs a level");
    if (steps_.size() + 1 != levels_.size()) {
      throw Error(ErrorCode::InvalidInput, "one step map per adjacent level pair");
    }
  }

  int first() const noexcept { return first_; }
  int top() const noexcept { return first_ + static_cast<int>(levels_.size()) - 1; }
  const GroupTable& level(int n) const { return levels_.at(index(n)); }
  const std::vector<Element>& step(int n) const { return steps_.at(index(n)); }
  const std::vector<GroupTable>& levels() const noexcept { return levels_; }
  const std::vector<std::vector<Element>>& steps() const noexcept { return steps_; }

  /// φ_{mn}(g) for m >= n.
  Element phi(int m, int n, Element g) const {
    for (int l = m; l > n; --l) g = step(l - 1).at(g);
    return g;
  }

 private:
  std::size_t index(int n) const {
    if (n < first_ || n > top()) throw Error(ErrorCode::InvalidInput, "level out of range");
    return static_cast<std::size_t>(n - first_);
  }

  int first_ = 0;
  std::vector<GroupTable> levels_;
  std::vector<std::vector<Element>> steps_;
};

struct GroupSectionFamily {
  int first = 0;
  std::vector<std::vector<Element>> steps;  // steps[j]: G_{first+j} -> G_{first+j+1}

  int top() const noexcept { return first + static_cast<int>(steps.size()); }

  /// r_{nm}(g) for n <= m.
  Element lift(int n, int m, Element g) const {
    for (int l = n; l < m; ++l) g = steps.at(static_cast<std::size_t>(l - first)).at(g);
    return g;
  }
};

inline CheckReport validate_group_system(const GroupSystem& sys) {
  CheckReport rep;
  for (int n = sys.first(); n < sys.top(); ++n) {
    auto h = check_homomorphism(sys.level(n + 1), sys.level(n), sys.step(n));
    for (const auto& v : h.violations) {
      rep.violations.push_back("step " + std::to_string(n + 1) + "->" + std::to_string(n) + ": " + v);
    }
  }
  return rep;
}

inline CheckReport validate_group_sections(const GroupSystem& sys, const GroupSectionFamily& r) {
  CheckReport rep;
  if (r.first != sys.first() || r.top() != sys.top()) {
    rep.violations.push_back("section levels do not match the group system");
    return rep;
  }
  for (int n = sys.first(); n < sys.top(); ++n) {
    const auto& step = r.steps.at(static_cast<std::size_t>(n - r.first));
    if (step.size() != sys.level(n).order()) {
      rep.violations.push_back("level " + std::to_string(n) + ": section not total");
      continue;
    }
    std::set<Element> image;
    for (Element g = 0; g < step.size(); ++g) {
      if (step[g] >= sys.level(n + 1).order()) {
        rep.violations.push_back("level " + std::to_string(n) + ": lift out of range");
        continue;
      }
      image.insert(step[g]);
      if (sys.step(n).at(step[g]) != g) {
        rep.violations.push_back("level " + std::to_string(n) + ": phi(r(" + sys.level(n).label(g) + ")) != " +
                                 sys.level(n).label(g));
      }
    }
    if (image.size() != step.size()) {
      rep.violations.push_back("level " + std::to_string(n) + ": section not injective");
    }
  }
  return rep;
}

/// (C2): r_{n0 m}(r_{n n0}(g) r_{n n0}(g')) = r_{nm}(g) r_{nm}(g') for all
/// m in [n0, N].
inline CoherenceReport check_c2(const GroupSystem& sys, const GroupSectionFamily& r) {
  CoherenceReport rep{"C2", {}};
  const int top = sys.top();
  for (int n = sys.first(); n < top; ++n) {
    const GroupTable& g = sys.level(n);
    for (Element a = 0; a < g.order(); ++a) {
      for (Element b = 0; b < g.order(); ++b) {
        auto holds = [&](int n0, int m) {
          const Element prod = sys.level(n0).mul(r.lift(n, n0, a), r.lift(n, n0, b));
          return r.lift(n0, m, prod) == sys.level(m).mul(r.lift(n, m, a), r.lift(n, m, b));
        };
        rep.add(n, "(" + g.label(a) + "," + g.label(b) + ")", top, minimal_witness(n, top, holds));
      }
    }
  }
  return rep;
}

/// A countable group known through an enumeration h_0, h_1, ... and its
/// projections to the levels of a group system.
template <class T>
struct EnumeratedGroup {
  std::function<T(std::size_t)> at;
  std::function<T(const T&, const T&)> mul;
  std::function<Element(const T&, int)> project;
  std::function<std::string(const T&)> name;
  std::size_t size = 0;  // 0 for an infinite enumeration

  std::vector<T> prefix(std::size_t k) const {
    if (size) k = std::min(k, size);
    std::vector<T> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(at(i));
    return out;
  }
};

/// Minimal level in [first, top] at which `elements` project injectively.
template <class T>
std::optional<int> injective_level(const EnumeratedGroup<T>& h, const std::vector<T>& elements, int first,
                                   int top) {
  for (int n = first; n <= top; ++n) {
    std::set<Element> seen;
    bool ok = true;
    for (const auto& x : elements) ok = ok && seen.insert(h.project(x, n)).second;
    if (ok) return n;
  }
  return std::nullopt;
}

struct OmegaEntry {
  std::string element;
  int entry_level = 0;   // n(h)
  Element value = 0;     // π_{n(h)}(h)
  Element top_image = 0; // r_{n(h),N}(π_{n(h)}(h))
};

struct OmegaReport {
  std::vector<OmegaEntry> entries;
  std::vector<std::string> mismatches;
  bool injective = true;
  bool ok() const { return injective && mismatches.empty(); }
};

/// ω(h) is the class of π_{n(h)}(h), where n(h) is the first level at which
/// h_0..h restricted to the prefix injects.  Checks θ∘ω = π coordinatewise
/// and injectivity of ω on the prefix.
template <class T>
OmegaReport omega_check(const EnumeratedGroup<T>& h, const GroupSystem& sys, const GroupSectionFamily& r,
                        std::size_t k) {
  const auto elems = h.prefix(k);
  const int top = sys.top();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      bool separated = false;
      for (int n = sys.first(); n <= top && !separated; ++n) {
        separated = h.project(elems[i], n) != h.project(elems[j], n);
      }
      if (!separated) {
        throw Error(ErrorCode::PrefixNotSeparated, h.name(elems[i]) + " and " + h.name(elems[j]));
      }
    }
  }
  OmegaReport rep;
  std::map<Element, std::string> seen;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::vector<T> prefix(elems.begin(), elems.begin() + static_cast<std::ptrdiff_t>(i + 1));
    const int n = *injective_level(h, prefix, sys.first(), top);
    const Element v = h.project(elems[i], n);
    OmegaEntry e{h.name(elems[i]), n, v, r.lift(n, top, v)};
    for (int l = sys.first(); l <= top; ++l) {
      const Element coord = l >= n ? r.lift(n, l, v) : sys.phi(n, l, v);
      if (coord != h.project(elems[i], l)) {
        rep.mismatches.push_back(e.element + " at level " + std::to_string(l));
      }
    }
    auto [it, fresh] = seen.emplace(e.top_image, e.element);
    if (!fresh) {
      rep.injective = false;
      rep.mismatches.push_back(e.element + " collides with " + it->second);
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace prograph
