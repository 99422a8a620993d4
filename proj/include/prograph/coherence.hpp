#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prograph {

/// Truncated reading of "there is i0 with the identity for every k >= i0".
/// Stable: witnessed with room to spare (i0 < N).  Provisional: the only
/// witness is the horizon N itself, one level above the subject.
/// Undetermined: anything else.
enum class Status { Stable, Provisional, Undetermined };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Stable: return "stable";
    case Status::Provisional: return "provisional";
    case Status::Undetermined: return "undetermined";
  }
  return "?";
}

/// Minimal i0 in [lo, top] such that holds(i0, k) for all k in [i0, top].
template <class Holds>
std::optional<int> minimal_witness(int lo, int top, Holds&& holds) {
  for (int i0 = lo; i0 <= top; ++i0) {
    bool ok = true;
    for (int k = i0; k <= top && ok; ++k) ok = holds(i0, k);
    if (ok) return i0;
  }
  return std::nullopt;
}

inline Status classify(int level, int top, std::optional<int> i0) {
  if (!i0) return Status::Undetermined;
  if (*i0 < top) return Status::Stable;
  return level + 1 == top ? Status::Provisional : Status::Undetermined;
}

struct CoherenceEntry {
  int level = 0;
  std::string subject;
  std::optional<int> i0;
  Status status = Status::Undetermined;
};

struct CoherenceReport {
  std::string condition;
  std::vector<CoherenceEntry> entries;

  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.status == s;
    return n;
  }
  bool ok() const { return count(Status::Undetermined) == 0; }

  void add(int level, std::string subject, int top, std::optional<int> i0) {
    entries.push_back({level, std::move(subject), i0, classify(level, top, i0)});
  }
};

struct CheckReport {
  std::vector<std::string> violations;
  bool valid() const noexcept { return violations.empty(); }
};

}  // namespace prograph
