#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "prograph/amalgam.hpp"
#include "prograph/dfaf.hpp"

namespace prograph::json_io {

using nlohmann::json;

// cell reference  {"kind":"v"|"e", "tag":str, "index":int}
// vertex reference {"tag":str, "index":int}
// graph     {"vertices":[vref], "edges":[{"tag","index","o":vref,"t":vref}]}
// map       [{"from":cellref, "to":cellref}]
// group     {"elements":[str], "mult":[[str]], "generators":[str]}
// action    {"act":[{"g":str, "cell":cellref, "image":cellref}]}
// prograph  {"first":int, "levels":[graph], "steps":[map], "sections":[map], "trees":[[cellref] | null]}
// groups    {"first":int, "levels":[group], "steps":[[str]], "sections":[[str]]}
// bundle    {"prograph":prograph, "groups":groups, "actions":[action]}
// amalgam   {"factors":[group], "base":group, "embeddings":[[str]]}

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, e.what());
  }
}

}  // namespace detail

inline json cell_json(const CellId& c) {
  return {{"kind", c.is_vertex() ? "v" : "e"}, {"tag", c.tag}, {"index", c.index}};
}

inline CellId cell_from(const json& j) {
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind != "v" && kind != "e") throw Error(ErrorCode::InvalidInput, "cell kind must be 'v' or 'e'");
  return CellId{kind == "v" ? CellKind::Vertex : CellKind::Edge, detail::field(j, "tag").get<std::string>(),
                detail::field(j, "index").get<std::int64_t>()};
}

inline json vref_json(const CellId& v) { return {{"tag", v.tag}, {"index", v.index}}; }

inline CellId vref_from(const json& j) {
  return vertex(detail::field(j, "tag").get<std::string>(), detail::field(j, "index").get<std::int64_t>());
}

inline json graph_json(const Graph& g) {
  json vs = json::array(), es = json::array();
  for (const auto& v : g.vertices()) vs.push_back(vref_json(v));
  for (const auto& [e, ends] : g.edges()) {
    es.push_back({{"tag", e.tag}, {"index", e.index}, {"o", vref_json(ends.first)}, {"t", vref_json(ends.second)}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

inline Graph graph_from(const json& j) {
  return detail::guarded([&] {
    std::vector<CellId> vs;
    std::vector<EdgeSpec> es;
    for (const auto& v : detail::field(j, "vertices")) vs.push_back(vref_from(v));
    for (const auto& e : detail::field(j, "edges")) {
      es.push_back({edge(detail::field(e, "tag").get<std::string>(), detail::field(e, "index").get<std::int64_t>()),
                    vref_from(detail::field(e, "o")), vref_from(detail::field(e, "t"))});
    }
    return make_graph(vs, es);
  });
}

inline json map_json(const CellMap& m) {
  json out = json::array();
  for (const auto& [a, b] : m) out.push_back({{"from", cell_json(a)}, {"to", cell_json(b)}});
  return out;
}

inline CellMap map_from(const json& j) {
  CellMap m;
  for (const auto& e : j) {
    if (!m.emplace(cell_from(detail::field(e, "from")), cell_from(detail::field(e, "to"))).second) {
      throw Error(ErrorCode::InvalidInput, "map lists a cell twice");
    }
  }
  return m;
}

inline json group_json(const GroupTable& g) {
  json mult = json::array(), gens = json::array();
  for (Element a = 0; a < g.order(); ++a) {
    json row = json::array();
    for (Element b = 0; b < g.order(); ++b) row.push_back(g.label(g.mul(a, b)));
    mult.push_back(row);
  }
  for (Element x : g.generators()) gens.push_back(g.label(x));
  return {{"elements", g.labels()}, {"mult", mult}, {"generators", gens}};
}

inline GroupTable group_from(const json& j) {
  return detail::guarded([&] {
    const auto labels = detail::field(j, "elements").get<std::vector<std::string>>();
    std::map<std::string, Element> index;
    for (Element i = 0; i < labels.size(); ++i) {
      if (!index.emplace(labels[i], i).second) throw Error(ErrorCode::InvalidInput, "duplicate element " + labels[i]);
    }
    auto at = [&](const std::string& s) {
      auto it = index.find(s);
      if (it == index.end()) throw Error(ErrorCode::InvalidInput, "unknown element " + s);
      return it->second;
    };
    std::vector<std::vector<Element>> mult;
    for (const auto& row : detail::field(j, "mult")) {
      std::vector<Element> r;
      for (const auto& x : row) r.push_back(at(x.get<std::string>()));
      mult.push_back(std::move(r));
    }
    std::vector<Element> gens;
    if (j.contains("generators")) {
      for (const auto& x : j.at("generators")) gens.push_back(at(x.get<std::string>()));
    }
    return GroupTable(labels, std::move(mult), std::move(gens));
  });
}

/// Images as labels: out[i] = label of f(element i).
inline json element_map_json(const GroupTable& dst, const std::vector<Element>& f) {
  json out = json::array();
  for (Element x : f) out.push_back(dst.label(x));
  return out;
}

inline std::vector<Element> element_map_from(const json& j, const GroupTable& src, const GroupTable& dst) {
  std::vector<Element> out;
  for (const auto& x : j) out.push_back(dst.find(x.get<std::string>()));
  if (out.size() != src.order()) throw Error(ErrorCode::InvalidInput, "element map has the wrong length");
  return out;
}

inline json action_json(const GraphAction& a) {
  json act = json::array();
  for (Element g = 0; g < a.group.order(); ++g) {
    for (const auto& [c, img] : a.act[g]) {
      act.push_back({{"g", a.group.label(g)}, {"cell", cell_json(c)}, {"image", cell_json(img)}});
    }
  }
  return {{"act", act}};
}

inline GraphAction action_from(const json& j, const GroupTable& g, const Graph& graph) {
  GraphAction a{g, graph, ActionMaps(g.order())};
  for (const auto& e : detail::field(j, "act")) {
    a.act[g.find(detail::field(e, "g").get<std::string>())].emplace(cell_from(detail::field(e, "cell")),
                                                                    cell_from(detail::field(e, "image")));
  }
  return a;
}

inline json prograph_json(const TruncatedPrograph& p, const SectionFamily& s) {
  json levels = json::array(), steps = json::array(), sections = json::array(), trees = json::array();
  for (int n = p.first(); n <= p.top(); ++n) levels.push_back(graph_json(p.level(n)));
  for (int n = p.first(); n < p.top(); ++n) steps.push_back(map_json(p.step(n).map));
  for (const auto& st : s.steps) sections.push_back(map_json(st));
  for (const auto& t : s.trees) {
    if (!t) {
      trees.push_back(nullptr);
      continue;
    }
    json cells = json::array();
    for (const auto& c : *t) cells.push_back(cell_json(c));
    trees.push_back(cells);
  }
  return {{"first", p.first()}, {"levels", levels}, {"steps", steps}, {"sections", sections}, {"trees", trees}};
}

struct PrographFile {
  TruncatedPrograph prograph;
  SectionFamily s;
};

inline PrographFile prograph_from(const json& j) {
  return detail::guarded([&] {
    const int first = detail::field(j, "first").get<int>();
    std::vector<Graph> levels;
    for (const auto& g : detail::field(j, "levels")) levels.push_back(graph_from(g));
    std::vector<GraphMorphism> steps;
    const auto& js = detail::field(j, "steps");
    if (js.size() + 1 != levels.size()) throw Error(ErrorCode::InvalidInput, "one step map per adjacent level pair");
    for (std::size_t i = 0; i < js.size(); ++i) steps.push_back({levels[i + 1], levels[i], map_from(js[i])});
    PrographFile out{TruncatedPrograph(first, levels, steps), SectionFamily{first, {}, {}}};
    if (j.contains("sections")) {
      for (const auto& m : j.at("sections")) out.s.steps.push_back(map_from(m));
    }
    if (j.contains("trees")) {
      for (const auto& t : j.at("trees")) {
        if (t.is_null()) {
          out.s.trees.push_back(std::nullopt);
          continue;
        }
        std::set<CellId> cells;
        for (const auto& c : t) cells.insert(cell_from(c));
        out.s.trees.push_back(std::move(cells));
      }
    }
    return out;
  });
}

inline json groups_json(const GroupSystem& sys, const GroupSectionFamily& r) {
  json levels = json::array(), steps = json::array(), sections = json::array();
  for (int n = sys.first(); n <= sys.top(); ++n) levels.push_back(group_json(sys.level(n)));
  for (int n = sys.first(); n < sys.top(); ++n) {
    steps.push_back(element_map_json(sys.level(n), sys.step(n)));
  }
  for (std::size_t j = 0; j < r.steps.size(); ++j) {
    const int n = r.first + static_cast<int>(j);
    sections.push_back(element_map_json(sys.level(n + 1), r.steps[j]));
  }
  return {{"first", sys.first()}, {"levels", levels}, {"steps", steps}, {"sections", sections}};
}

struct GroupsFile {
  GroupSystem groups;
  GroupSectionFamily r;
};

inline GroupsFile groups_from(const json& j) {
  return detail::guarded([&] {
    const int first = detail::field(j, "first").get<int>();
    std::vector<GroupTable> levels;
    for (const auto& g : detail::field(j, "levels")) levels.push_back(group_from(g));
    const auto& js = detail::field(j, "steps");
    if (js.size() + 1 != levels.size()) throw Error(ErrorCode::InvalidInput, "one step map per adjacent level pair");
    std::vector<std::vector<Element>> steps;
    for (std::size_t i = 0; i < js.size(); ++i) steps.push_back(element_map_from(js[i], levels[i + 1], levels[i]));
    GroupsFile out{GroupSystem(first, levels, steps), GroupSectionFamily{first, {}}};
    if (j.contains("sections")) {
      const auto& rs = j.at("sections");
      for (std::size_t i = 0; i < rs.size() && i + 1 < levels.size(); ++i) {
        out.r.steps.push_back(element_map_from(rs[i], levels[i], levels[i + 1]));
      }
    }
    return out;
  });
}

inline json bundle_json(const ProActionBundle& b) {
  json actions = json::array();
  for (const auto& a : b.actions) actions.push_back(action_json(a));
  return {{"prograph", prograph_json(b.prograph, b.s)}, {"groups", groups_json(b.groups, b.r)}, {"actions", actions}};
}

inline ProActionBundle bundle_from(const json& j) {
  return detail::guarded([&] {
    auto p = prograph_from(detail::field(j, "prograph"));
    auto g = groups_from(detail::field(j, "groups"));
    ProActionBundle b{p.prograph, g.groups, {}, p.s, g.r};
    const auto& acts = detail::field(j, "actions");
    if (acts.size() != static_cast<std::size_t>(b.top() - b.first() + 1)) {
      throw Error(ErrorCode::InvalidInput, "one action per level");
    }
    for (int n = b.first(); n <= b.top(); ++n) {
      if (n < g.groups.first() || n > g.groups.top()) throw Error(ErrorCode::InvalidInput, "group levels misaligned");
      b.actions.push_back(action_from(acts[static_cast<std::size_t>(n - b.first())], g.groups.level(n),
                                      b.prograph.level(n)));
    }
    return b;
  });
}

inline json amalgam_json(const AmalgamPresentation& p) {
  json factors = json::array(), emb = json::array();
  for (std::size_t i = 0; i < p.factors().size(); ++i) {
    factors.push_back(group_json(p.factors()[i]));
    emb.push_back(element_map_json(p.factors()[i], p.embeddings()[i]));
  }
  return {{"factors", factors}, {"base", group_json(p.base())}, {"embeddings", emb}};
}

inline AmalgamPresentation amalgam_from(const json& j) {
  return detail::guarded([&] {
    std::vector<GroupTable> factors;
    for (const auto& g : detail::field(j, "factors")) factors.push_back(group_from(g));
    GroupTable base = group_from(detail::field(j, "base"));
    const auto& je = detail::field(j, "embeddings");
    if (je.size() != factors.size()) throw Error(ErrorCode::InvalidInput, "one embedding per factor required");
    std::vector<std::vector<Element>> emb;
    for (std::size_t i = 0; i < factors.size(); ++i) emb.push_back(element_map_from(je[i], base, factors[i]));
    return AmalgamPresentation(std::move(factors), std::move(base), std::move(emb));
  });
}

inline json parse(const std::string& text) {
  return detail::guarded([&] { return json::parse(text); });
}

}  // namespace prograph::json_io
