#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>

namespace prograph {

enum class CellKind : std::uint8_t { Vertex, Edge };

/// Label of a vertex or an oriented edge.  The defaulted ordering (kind,
/// tag, index) is the canonical order used whenever a choice has to be made.
struct CellId {
  CellKind kind = CellKind::Vertex;
  std::string tag;
  std::int64_t index = 0;

  bool is_vertex() const noexcept { return kind == CellKind::Vertex; }
  bool is_edge() const noexcept { return kind == CellKind::Edge; }

  auto operator<=>(const CellId&) const = default;
  bool operator==(const CellId&) const = default;
};

inline CellId vertex(std::string tag, std::int64_t index) {
  return CellId{CellKind::Vertex, std::move(tag), index};
}

inline CellId edge(std::string tag, std::int64_t index) {
  return CellId{CellKind::Edge, std::move(tag), index};
}

inline std::string to_string(const CellId& c) {
  return c.tag + "_" + std::to_string(c.index);
}

inline std::ostream& operator<<(std::ostream& os, const CellId& c) {
  return os << (c.is_vertex() ? "v:" : "e:") << to_string(c);
}

/// A total or partial map between cell sets.
using CellMap = std::map<CellId, CellId>;

}  // namespace prograph
