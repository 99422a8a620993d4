#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prograph/dihedral.hpp"
#include "prograph/json_io.hpp"
#include "prograph/puiseux.hpp"

namespace prograph::cli {

// Exit codes: 0 clean (provisional entries allowed), 1 violations or
// undetermined entries, 2 usage or input errors.
inline constexpr int kOk = 0;
inline constexpr int kViolations = 1;
inline constexpr int kUsage = 2;

struct RunConfig {
  std::string verb;
  std::string target;  // check condition or example name
  std::string input;
  std::string builtin = "dihedral";
  std::string group = "dihedral";
  std::int64_t p = 3;
  int depth = 3;
  int n = 1;
  std::int64_t radius = -1;  // verb default when negative
  int horizon = 1;
  std::int64_t shifts = 4;
  std::string emit = "text";
};

/// Verb, the checkers it reaches.  Each checker appears under one verb.
inline const std::vector<std::pair<std::string, std::string>>& verb_table() {
  static const std::vector<std::pair<std::string, std::string>> t{
      {"example", "dihedral::bundle, puiseux::galois_graph, amalgam presentations"},
      {"check c1", "validate_prograph, validate_sections, check_c1"},
      {"check c2", "validate_group_system, validate_group_sections, check_c2"},
      {"check c3", "check_c3"},
      {"check c4", "check_c4"},
      {"check equivariance", "validate_bundle, check_equivariance"},
      {"check puiseux-iso", "iso_to_dihedral, theta_square"},
      {"quotient", "orbit_quotient"},
      {"colimit", "is_sylvestre_truncated"},
      {"bass-serre", "bass_serre_ball, fundamental_domain_of, segment_decomposition_of"},
      {"build", "build_dfaf, reconstruction, omega_check"},
      {"induced-action", "induced_colimit_action, check_colimit_fundamental_domain"},
      {"export", "export_dot, bundle_json"},
      {"verbs", ""},
  };
  return t;
}

namespace detail {

inline json_io::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json_io::parse(ss.str());
}

inline ProActionBundle bundle_source(const RunConfig& c) {
  if (!c.input.empty()) return json_io::bundle_from(read_json(c.input));
  if (c.builtin != "dihedral") throw Error(ErrorCode::InvalidInput, "bundle builtin must be dihedral");
  return dihedral::bundle(c.p, c.depth);
}

inline json_io::PrographFile prograph_source(const RunConfig& c) {
  if (!c.input.empty()) {
    const auto j = read_json(c.input);
    if (j.contains("prograph")) return json_io::prograph_from(j.at("prograph"));
    return json_io::prograph_from(j);
  }
  if (c.builtin != "dihedral") throw Error(ErrorCode::InvalidInput, "prograph builtin must be dihedral");
  return {dihedral::tower(c.p, c.depth), dihedral::sections(c.p, c.depth)};
}

inline json_io::GroupsFile groups_source(const RunConfig& c) {
  if (!c.input.empty()) {
    const auto j = read_json(c.input);
    if (j.contains("groups")) return json_io::groups_from(j.at("groups"));
    return json_io::groups_from(j);
  }
  if (c.builtin != "dihedral") throw Error(ErrorCode::InvalidInput, "group builtin must be dihedral");
  return {dihedral::group_system(c.p, c.depth), dihedral::group_sections(c.p, c.depth)};
}

inline AmalgamPresentation amalgam_source(const RunConfig& c) {
  if (!c.input.empty()) return json_io::amalgam_from(read_json(c.input));
  if (c.builtin == "modular") return modular_amalgam();
  if (c.builtin == "dinfty") return infinite_dihedral_amalgam();
  throw Error(ErrorCode::InvalidInput, "amalgam builtin must be modular or dinfty");
}

inline int print_check(std::ostream& out, const std::string& title, const CheckReport& rep) {
  out << title << ": " << (rep.valid() ? "valid" : "INVALID") << "\n";
  for (const auto& v : rep.violations) out << "  violation: " << v << "\n";
  return rep.valid() ? kOk : kViolations;
}

inline int print_coherence(std::ostream& out, const CoherenceReport& rep) {
  for (const auto& e : rep.entries) {
    out << "level " << e.level << "  " << e.subject << "  " << to_string(e.status);
    if (e.i0) out << "(" << *e.i0 << ")";
    out << "\n";
  }
  out << rep.condition << " summary: stable=" << rep.count(Status::Stable)
      << " provisional=" << rep.count(Status::Provisional) << " undetermined=" << rep.count(Status::Undetermined)
      << "\n";
  return rep.ok() ? kOk : kViolations;
}

inline void print_levels_dot(std::ostream& out, const TruncatedPrograph& p) {
  for (int n = p.first(); n <= p.top(); ++n) {
    out << "// level " << n << "\n" << export_dot(p.level(n));
  }
}

inline int run_example(const RunConfig& c, std::ostream& out) {
  if (c.target == "dihedral") {
    const auto b = dihedral::bundle(c.p, c.depth);
    if (c.emit == "json") {
      out << json_io::bundle_json(b).dump(2) << "\n";
    } else if (c.emit == "dot") {
      print_levels_dot(out, b.prograph);
    } else {
      out << "dihedral p=" << c.p << " depth=" << c.depth << "\n";
      for (int n = 1; n <= c.depth; ++n) {
        out << "level " << n << ": " << b.prograph.level(n).num_vertices() << " vertices, "
            << b.prograph.level(n).num_edges() << " edges, group order " << b.groups.level(n).order()
            << ", wrap edge " << to_string(dihedral::wrap_edge(c.p, n)) << "\n";
      }
      return print_check(out, "bundle", validate_bundle(b));
    }
    return kOk;
  }
  if (c.target == "puiseux") {
    const Graph g = puiseux::galois_graph(c.p, c.n);
    if (c.emit == "json") {
      out << json_io::graph_json(g).dump(2) << "\n";
    } else if (c.emit == "dot") {
      out << export_dot(g);
    } else {
      out << "puiseux p=" << c.p << " n=" << c.n << ": " << g.num_vertices() << " roots, " << g.num_edges()
          << " edges\n";
      for (const auto& v : g.vertices()) out << "  " << to_string(v) << " = " << puiseux::to_string(puiseux::root(c.p, c.n, v.index)) << "\n";
    }
    return kOk;
  }
  if (c.target == "amalgam") {
    const auto pres = amalgam_source(c);
    if (c.emit == "json") {
      out << json_io::amalgam_json(pres).dump(2) << "\n";
    } else {
      out << "amalgam with factor orders";
      for (const auto& f : pres.factors()) out << " " << f.order();
      out << " over a base of order " << pres.base().order() << "\n";
    }
    return kOk;
  }
  throw CLI::ValidationError("example", "expected dihedral, puiseux or amalgam");
}

inline int run_check(const RunConfig& c, std::ostream& out) {
  const std::string& what = c.target;
  if (what == "c1") {
    const auto f = prograph_source(c);
    int rc = print_check(out, "prograph", validate_prograph(f.prograph));
    rc = std::max(rc, print_check(out, "sections", validate_sections(f.prograph, f.s)));
    if (rc != kOk) return rc;
    return print_coherence(out, check_c1(f.prograph, f.s));
  }
  if (what == "c2") {
    const auto g = groups_source(c);
    int rc = print_check(out, "groups", validate_group_system(g.groups));
    rc = std::max(rc, print_check(out, "group sections", validate_group_sections(g.groups, g.r)));
    if (rc != kOk) return rc;
    return print_coherence(out, check_c2(g.groups, g.r));
  }
  if (what == "c3" || what == "c4") {
    const auto b = bundle_source(c);
    int rc = print_check(out, "bundle", validate_bundle(b));
    if (rc != kOk) return rc;
    return print_coherence(out, what == "c3" ? check_c3(b) : check_c4(b));
  }
  if (what == "equivariance") {
    const auto b = bundle_source(c);
    int rc = print_check(out, "bundle", validate_bundle(b));
    if (rc != kOk) return rc;
    return print_check(out, "equivariance", check_equivariance(b));
  }
  if (what == "puiseux-iso") {
    int rc = kOk;
    for (int n = 1; n <= c.n; ++n) {
      try {
        const auto iso = puiseux::iso_to_dihedral(c.p, n);
        out << "level " << n << ": isomorphism k -> " << (iso.sign > 0 ? "" : "-") << "k + " << iso.shift
            << " after " << iso.candidates_tried << " candidate(s)\n";
        rc = std::max(rc, print_check(out, "  equivariance", iso.equivariance));
        if (n >= 2) rc = std::max(rc, print_check(out, "  theta square", puiseux::theta_square(c.p, n)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoEquivariantIso) throw;
        out << "level " << n << ": " << e.what() << "\n";
        rc = kViolations;
      }
    }
    return rc;
  }
  throw CLI::ValidationError("check", "expected c1, c2, c3, c4, equivariance or puiseux-iso");
}

inline int run_quotient(const RunConfig& c, std::ostream& out) {
  OrbitQuotient q;
  bool expected = true;
  if (c.builtin == "dihedral") {
    const std::int64_t m = ipow(c.p, static_cast<unsigned>(c.n));
    const Graph ball = dihedral::line_ball(c.radius >= 0 ? c.radius : m + 2);
    ActionMaps maps;
    for (std::int64_t k = -3; k <= 3; ++k) {
      CellMap t;
      for (const auto& cell : ball.cells()) {
        const CellId img{cell.kind, cell.tag, cell.index + k * m};
        if (ball.contains(img)) t.emplace(cell, img);
      }
      maps.push_back(std::move(t));
    }
    q = orbit_quotient(ball, maps);
    expected = is_isomorphic(q.quotient, dihedral::level_graph({c.p, c.n}));
    if (c.emit == "text") out << "line ball mod " << m << " isomorphic to level graph: " << (expected ? "yes" : "no") << "\n";
  } else {
    const auto pres = amalgam_source(c);
    const auto ball = bass_serre_ball(pres, static_cast<std::size_t>(c.radius >= 0 ? c.radius : 2));
    q = orbit_quotient(ball.graph(), ball.action_maps(pres.enumerate(2)));
    expected = q.quotient.num_vertices() == 2 && q.quotient.num_edges() == 1;
    if (c.emit == "text") out << "Bass-Serre ball quotient is a segment: " << (expected ? "yes" : "no") << "\n";
  }
  if (c.emit == "dot") {
    out << export_dot(q.quotient);
  } else if (c.emit == "json") {
    out << json_io::graph_json(q.quotient).dump(2) << "\n";
  } else {
    out << "quotient: " << q.quotient.num_vertices() << " vertices, " << q.quotient.num_edges() << " edges\n";
  }
  return expected ? kOk : kViolations;
}

inline int run_colimit(const RunConfig& c, std::ostream& out) {
  const auto f = prograph_source(c);
  const auto rep = is_sylvestre_truncated(f.prograph, f.s, c.horizon);
  if (c.emit == "dot") {
    out << export_dot(rep.colimit.graph);
  } else if (c.emit == "json") {
    out << json_io::graph_json(rep.colimit.graph).dump(2) << "\n";
  } else {
    out << "colimit at horizon " << c.horizon << " (levels <= " << rep.colimit.depth << "): "
        << rep.colimit.graph.num_vertices() << " vertices, " << rep.colimit.graph.num_edges() << " edges\n"
        << "tree: " << (rep.is_tree ? "yes" : "no") << "\n"
        << "edges beyond the horizon: " << rep.excluded_edges << "\n";
    if (rep.cycle) {
      out << "cycle:";
      for (const auto& x : *rep.cycle) out << " " << to_string(x);
      out << "\n";
    }
  }
  return rep.is_tree ? kOk : kViolations;
}

inline int run_bass_serre(const RunConfig& c, std::ostream& out) {
  const auto pres = amalgam_source(c);
  const auto radius = static_cast<std::size_t>(c.radius >= 0 ? c.radius : 2);
  const auto ball = bass_serre_ball(pres, radius);
  const Graph& g = ball.graph();
  if (c.emit == "dot") {
    out << export_dot(g);
    return is_tree(g) ? kOk : kViolations;
  }
  if (c.emit == "json") {
    out << json_io::graph_json(g).dump(2) << "\n";
    return is_tree(g) ? kOk : kViolations;
  }
  const auto maps = ball.action_maps(pres.enumerate(2));
  const Graph t = fundamental_domain_of(g, maps, *ball.cell_of(pres.identity(), 0));
  auto [sp, sq, se] = segment_decomposition_of(maps, t);
  std::map<std::string, std::set<std::size_t>> degrees;
  for (const auto& v : g.vertices()) {
    if (ball.sequence_of(v).size() + 1 > ball.radius()) continue;  // boundary
    degrees[v.tag].insert(g.incident(v).size());
  }
  out << "Bass-Serre ball radius " << radius << ": " << g.num_vertices() << " vertices, " << g.num_edges()
      << " edges, tree: " << (is_tree(g) ? "yes" : "no") << "\n";
  for (const auto& [tag, ds] : degrees) {
    out << "interior " << tag << " degrees:";
    for (auto d : ds) out << " " << d;
    out << "\n";
  }
  out << "segment stabilizer orders: " << sp.size() << " " << sq.size() << " " << se.size() << "\n";
  return is_tree(g) ? kOk : kViolations;
}

template <class T>
int report_build(const RunConfig& c, std::ostream& out, const DfafResult<T>& r) {
  if (c.emit == "json") {
    out << json_io::bundle_json(r.bundle).dump(2) << "\n";
    return validate_bundle(r.bundle).valid() ? kOk : kViolations;
  }
  out << "ledger i:";
  for (auto i : r.ledger.i) out << " " << i;
  out << "\nledger n:";
  for (auto n : r.ledger.n) out << " " << n;
  out << "\n";
  int rc = print_check(out, "bundle", validate_bundle(r.bundle));
  if (rc != kOk) return rc;
  rc = std::max(rc, print_check(out, "equivariance", check_equivariance(r.bundle)));
  auto counts = [&](const CoherenceReport& rep) {
    out << rep.condition << ": stable=" << rep.count(Status::Stable) << " provisional=" << rep.count(Status::Provisional)
        << " undetermined=" << rep.count(Status::Undetermined) << "\n";
  };
  counts(check_c1(r.bundle.prograph, r.bundle.s));
  counts(check_c2(r.bundle.groups, r.bundle.r));
  counts(check_c3(r.bundle));
  counts(check_c4(r.bundle));
  return rc;
}

inline int run_build(const RunConfig& c, std::ostream& out) {
  if (c.group == "dihedral") {
    const auto h = dihedral::enumerated(c.p);
    const auto act = dihedral::line_tree_action(c.radius >= 0 ? c.radius : 4 * ipow(c.p, static_cast<unsigned>(c.depth)));
    const auto f = dihedral::filtration(c.p, c.depth);
    const auto r = build_dfaf(h, act, f, c.depth);
    int rc = report_build(c, out, r);
    if (c.emit == "text") {
      const auto g = build_graph_sections(h, act, f, c.depth);
      if (c.depth >= 2) {
        const auto rec = reconstruction(g, f, act, colimit_graph(g.prograph, g.s, 1));
        out << "reconstruction: " << (rec.ok() ? "injective" : "BROKEN") << ", " << rec.psi.size()
            << " cells placed, " << rec.unreached << " colimit cells beyond the ledger\n";
        if (!rec.ok()) rc = kViolations;
      }
      const std::int64_t half = ipow(c.p, static_cast<unsigned>(c.depth)) / 2;
      const auto om = omega_check(h, r.bundle.groups, r.bundle.r, static_cast<std::size_t>(4 * half + 2));
      out << "omega on |x| <= " << half << ": " << (om.ok() ? "ok" : "MISMATCH") << "\n";
      if (!om.ok()) rc = kViolations;
    }
    return rc;
  }
  if (c.group == "dinfty-words") {
    const auto pres = infinite_dihedral_amalgam();
    const auto f = dihedral_word_filtration(c.p, c.depth);
    return report_build(c, out,
                        build_dfaf(projected(word_enumeration(pres), f),
                                   bass_serre_action(pres, static_cast<std::size_t>(c.radius >= 0 ? c.radius : 12)),
                                   f, c.depth));
  }
  if (c.group == "modular") {
    if (c.depth > 2) throw Error(ErrorCode::InvalidInput, "modular quotients grow as p^{3n}; use depth <= 2");
    const auto pres = modular_amalgam();
    const auto f = modular_filtration(c.p, c.depth);
    return report_build(c, out,
                        build_dfaf(projected(word_enumeration(pres), f),
                                   bass_serre_action(pres, static_cast<std::size_t>(c.radius >= 0 ? c.radius : 8)),
                                   f, c.depth));
  }
  throw CLI::ValidationError("--group", "expected dihedral, dinfty-words or modular");
}

inline int run_induced(const RunConfig& c, std::ostream& out) {
  if (c.builtin != "dihedral") throw Error(ErrorCode::InvalidInput, "induced-action needs the dihedral builtin");
  const auto b = dihedral::bundle(c.p, c.depth);
  std::vector<GroupClass> classes;
  for (std::int64_t a = -c.shifts; a <= c.shifts; ++a) {
    for (int f = 0; f < 2; ++f) classes.push_back(dihedral::group_class(c.p, c.depth, {a, f}));
  }
  const auto ia = induced_colimit_action(b, classes, c.horizon);
  const auto fd = check_colimit_fundamental_domain(b, ia);
  out << "induced action of " << classes.size() << " elements on " << ia.colimit.graph.num_cells()
      << " colimit cells\n"
      << "outside range: " << ia.outside_range << ", undetermined: " << ia.undetermined.size()
      << ", inconsistent: " << ia.inconsistencies.size() << "\n";
  std::vector<std::size_t> orders;
  for (const auto& cell : *b.s.trees.front()) {
    const CellId l = ia.colimit.label_of.at({b.first(), cell});
    std::size_t k = 0;
    for (const auto& m : ia.maps) {
      auto it = m.find(l);
      k += it != m.end() && it->second == l;
    }
    out << "stabilizer of " << to_string(l) << ": " << k << "\n";
  }
  out << "fundamental domain: " << (fd.ok() ? "ok" : "VIOLATED") << ", " << (fd.complete() ? "complete" : "incomplete")
      << "\n";
  for (const auto& v : fd.violations) out << "  violation: " << v << "\n";
  for (const auto& v : ia.inconsistencies) out << "  inconsistent: " << v << "\n";
  return fd.ok() && ia.inconsistencies.empty() ? kOk : kViolations;
}

inline int run_export(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw CLI::ValidationError("--input", "export needs an input file");
  const auto j = read_json(c.input);
  if (j.contains("prograph")) {
    const auto b = json_io::bundle_from(j);
    if (c.emit == "json") {
      out << json_io::bundle_json(b).dump(2) << "\n";
    } else {
      print_levels_dot(out, b.prograph);
    }
  } else if (j.contains("levels")) {
    const auto p = json_io::prograph_from(j);
    if (c.emit == "json") {
      out << json_io::prograph_json(p.prograph, p.s).dump(2) << "\n";
    } else {
      print_levels_dot(out, p.prograph);
    }
  } else {
    const Graph g = json_io::graph_from(j);
    out << (c.emit == "json" ? json_io::graph_json(g).dump(2) + "\n" : export_dot(g));
  }
  return kOk;
}

inline int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.verb == "example") return run_example(c, out);
  if (c.verb == "check") return run_check(c, out);
  if (c.verb == "quotient") return run_quotient(c, out);
  if (c.verb == "colimit") return run_colimit(c, out);
  if (c.verb == "bass-serre") return run_bass_serre(c, out);
  if (c.verb == "build") return run_build(c, out);
  if (c.verb == "induced-action") return run_induced(c, out);
  if (c.verb == "export") return run_export(c, out);
  for (const auto& [v, checkers] : verb_table()) {
    out << v;
    if (!checkers.empty()) out << std::string(v.size() < 20 ? 20 - v.size() : 1, ' ') << checkers;
    out << "\n";
  }
  return kOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Finite truncations of profinite actions on prographs"};
  app.require_subcommand(1);
  auto emit = [&](CLI::App* s) {
    s->add_option("--emit", c.emit, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
  };
  auto level_flags = [&](CLI::App* s) {
    s->add_option("--p", c.p, "prime")->check(CLI::Range(2, 97));
    s->add_option("--depth", c.depth, "top level N")->check(CLI::Range(1, 12));
    s->add_option("--n", c.n, "level")->check(CLI::Range(1, 12));
    s->add_option("--radius", c.radius, "ball radius")->check(CLI::NonNegativeNumber);
    s->add_option("--horizon", c.horizon, "colimit horizon h")->check(CLI::Range(1, 12));
    s->add_option("--input", c.input, "JSON input file");
    s->add_option("--builtin", c.builtin, "builtin example")
        ->check(CLI::IsMember({"dihedral", "puiseux", "amalgam", "modular", "dinfty"}));
    emit(s);
  };
  auto* example = app.add_subcommand("example", "generate a builtin example");
  example->add_option("which", c.target)->required()->check(CLI::IsMember({"dihedral", "puiseux", "amalgam"}));
  level_flags(example);
  auto* check = app.add_subcommand("check", "run one checker");
  check->add_option("condition", c.target)
      ->required()
      ->check(CLI::IsMember({"c1", "c2", "c3", "c4", "equivariance", "puiseux-iso"}));
  level_flags(check);
  auto* quotient = app.add_subcommand("quotient", "orbit quotient of a ball");
  level_flags(quotient);
  auto* colimit = app.add_subcommand("colimit", "truncated colimit graph");
  level_flags(colimit);
  auto* bass = app.add_subcommand("bass-serre", "Bass-Serre ball of an amalgam");
  level_flags(bass);
  auto* build = app.add_subcommand("build", "sections from an enumeration and a filtration");
  level_flags(build);
  build->add_option("--group", c.group, "group and tree")
      ->check(CLI::IsMember({"dihedral", "dinfty-words", "modular"}));
  auto* induced = app.add_subcommand("induced-action", "action induced on the colimit");
  level_flags(induced);
  induced->add_option("--shifts", c.shifts, "use (a,b) with |a| <= shifts")->check(CLI::NonNegativeNumber);
  auto* exp = app.add_subcommand("export", "re-emit a JSON file");
  level_flags(exp);
  app.add_subcommand("verbs", "list verbs and the checkers they reach");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }
  c.verb = app.get_subcommands().front()->get_name();
  if (c.verb == "bass-serre" || (c.verb == "example" && c.target == "amalgam") ||
      (c.verb == "quotient" && c.builtin == "amalgam")) {
    if (c.builtin == "dihedral" || c.builtin == "amalgam") c.builtin = "modular";
  }
  if (c.verb == "colimit" && c.input.empty() && c.horizon >= c.depth) {
    err << "error: horizon must be below depth\n";
    return kUsage;
  }
  try {
    return detail::dispatch(c, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace prograph::cli
