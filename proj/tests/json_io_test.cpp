#include <gtest/gtest.h>

#include <string>

#include "prograph/dihedral.hpp"
#include "prograph/json_io.hpp"

namespace prograph {
namespace {

using dihedral::E;
using dihedral::P;
using dihedral::Q;
using json_io::json;

TEST(JsonGraph, Schema) {
  const Graph g = make_graph({P(0), Q(0)}, {{E(0, 0), P(0), Q(0)}});
  const json j = json_io::graph_json(g);
  const json want = json::parse(R"({
    "vertices": [{"tag": "P", "index": 0}, {"tag": "Q", "index": 0}],
    "edges": [{"tag": "e0", "index": 0, "o": {"tag": "P", "index": 0}, "t": {"tag": "Q", "index": 0}}]
  })");
  EXPECT_EQ(j, want);
  EXPECT_EQ(json_io::graph_json(json_io::graph_from(j)), j);
}

TEST(JsonGraph, DanglingEndpointRejected) {
  const json j = json::parse(R"({"vertices": [{"tag": "P", "index": 0}],
    "edges": [{"tag": "e0", "index": 0, "o": {"tag": "P", "index": 0}, "t": {"tag": "Q", "index": 0}}]})");
  EXPECT_THROW(json_io::graph_from(j), Error);
}

TEST(JsonGraph, MissingFieldRejected) {
  try {
    json_io::graph_from(json::parse(R"({"vertices": []})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(JsonGroup, RoundTrip) {
  const GroupTable d3 = dihedral_group(3);
  const json j = json_io::group_json(d3);
  EXPECT_EQ(j["elements"].size(), 6u);
  EXPECT_EQ(j["mult"][0][0], d3.label(d3.identity()));
  const GroupTable back = json_io::group_from(j);
  EXPECT_EQ(back.labels(), d3.labels());
  for (Element a = 0; a < d3.order(); ++a) {
    for (Element b = 0; b < d3.order(); ++b) EXPECT_EQ(back.mul(a, b), d3.mul(a, b));
  }
  EXPECT_EQ(back.generators(), d3.generators());
}

TEST(JsonGroup, UnknownElementRejected) {
  json j = json_io::group_json(cyclic_group(2));
  j["mult"][1][1] = "nope";
  EXPECT_THROW(json_io::group_from(j), Error);
}

TEST(JsonBundle, RoundTripPreservesChecks) {
  const auto b = dihedral::bundle(3, 3);
  const json j = json_io::bundle_json(b);
  const auto back = json_io::bundle_from(json_io::parse(j.dump()));
  EXPECT_EQ(json_io::bundle_json(back), j);
  EXPECT_TRUE(validate_bundle(back).valid());
  const auto c1a = check_c1(b.prograph, b.s), c1b = check_c1(back.prograph, back.s);
  ASSERT_EQ(c1a.entries.size(), c1b.entries.size());
  for (std::size_t i = 0; i < c1a.entries.size(); ++i) EXPECT_EQ(c1a.entries[i].i0, c1b.entries[i].i0);
  EXPECT_EQ(check_c4(back).count(Status::Undetermined), check_c4(b).count(Status::Undetermined));
}

TEST(JsonBundle, CorruptedSectionDetectedAfterLoad) {
  json j = json_io::bundle_json(dihedral::bundle(3, 2));
  for (auto& e : j["prograph"]["sections"][0]) {
    if (e["from"]["tag"] == "P" && e["from"]["index"] == 1) e["to"]["index"] = 2;
  }
  const auto back = json_io::bundle_from(j);
  EXPECT_FALSE(validate_sections(back.prograph, back.s).valid());
}

TEST(JsonBundle, MisalignedActionsRejected) {
  json j = json_io::bundle_json(dihedral::bundle(3, 2));
  j["actions"].erase(1);
  EXPECT_THROW(json_io::bundle_from(j), Error);
}

TEST(JsonAmalgam, RoundTrip) {
  const auto p = modular_amalgam();
  const auto back = json_io::amalgam_from(json_io::amalgam_json(p));
  EXPECT_EQ(json_io::amalgam_json(back), json_io::amalgam_json(p));
  EXPECT_EQ(back.factors()[0].order(), 4u);
  EXPECT_EQ(back.factors()[1].order(), 6u);
}

TEST(JsonParse, SyntaxErrorIsInvalidInput) {
  try {
    json_io::parse("{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

}  // namespace
}  // namespace prograph
