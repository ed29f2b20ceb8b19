#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "reflexive/error.hpp"
#include "reflexive/io.hpp"

using namespace reflexive;

namespace {

std::string data(const char* name) { return std::string(REFLEXIVE_TEST_DATA) + "/" + name; }

Json dumbbell_datum_json() { return read_json_file(data("dumbbell_datum.json")); }

}  // namespace

TEST_CASE("dumbbell datum file round trip") {
  const ConfigurationDatum d = parse_datum(dumbbell_datum_json());
  CHECK(d.edges.size() == 4);
  CHECK(d.tau[2] == EdgeType::vertical);
  CHECK(d.e0 == 0u);
  CHECK(d.extra_linear_constraints.size() == 1);
  CHECK(validate_datum(d).ok());
}

TEST_CASE("datum parse errors are malformed") {
  Json j = dumbbell_datum_json();
  j.erase("iota");
  CHECK_THROWS_WITH_AS(parse_datum(j), doctest::Contains("malformed"), Error);

  j = dumbbell_datum_json();
  j["tau"]["a1"] = "x";
  CHECK_THROWS_WITH_AS(parse_datum(j), doctest::Contains("malformed"), Error);

  j = dumbbell_datum_json();
  j["sigma"]["a1"] = "zz";
  CHECK_THROWS_WITH_AS(parse_datum(j), doctest::Contains("malformed"), Error);

  j = dumbbell_datum_json();
  j["iota"]["a1"] = "nope";
  CHECK_THROWS_WITH_AS(parse_datum(j), doctest::Contains("malformed"), Error);

  CHECK_THROWS_WITH_AS(parse_datum(Json::array()), doctest::Contains("malformed"), Error);
  CHECK_THROWS_WITH_AS(read_json_file(data("truncated.json")), doctest::Contains("malformed"), Error);
  CHECK_THROWS_WITH_AS(read_json_file(data("does_not_exist.json")), doctest::Contains("io_error"), Error);
}

TEST_CASE("field specs for both families") {
  const FamilySetup d = parse_field_spec(read_json_file(data("dumbbell_field.json")));
  CHECK(d.family == "dumbbell");
  CHECK(d.field.dim() == 2);
  CHECK(d.box.lo(0) == 0.6);
  CHECK(d.box.hi(1) == 3.0);

  const FamilySetup s = parse_field_spec(read_json_file(data("stacked_field.json")));
  CHECK(s.field.dim() == 4);
  CHECK(s.field.height(s.reference) == doctest::Approx(0.48045301391820139));

  CHECK_THROWS_WITH_AS(parse_field_spec(Json{{"family", "torus"}}), doctest::Contains("malformed"), Error);
  CHECK_THROWS_WITH_AS(parse_field_spec(Json{{"family", "dumbbell"}}), doctest::Contains("malformed"), Error);
  CHECK_THROWS_WITH_AS(parse_field_spec(Json{{"family", "dumbbell"}, {"ell", -1.0}}), doctest::Contains("malformed"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_field_spec(Json{{"family", "dumbbell"}, {"ell", 0.5}, {"box", {{"lo", {1.0}}, {"hi", {2.0}}}}}),
                       doctest::Contains("malformed"), Error);
}

TEST_CASE("field spec push and ray overrides") {
  Json j{{"family", "dumbbell"}, {"ell", 0.5}};
  j["push"] = Json{{"preset", "coordinate_scaling"}, {"weighting", "none"}, {"sign", -1.0}};
  FamilySetup s = parse_field_spec(j);
  CHECK(s.push.weighting == PushWeighting::none);
  CHECK(s.push.base(Eigen::Vector2d(2.0, 3.0), 0)(0) == -2.0);

  j["push"] = Json{{"preset", "custom"},
                   {"fields", Json::array({Json{{"curve", "alpha1"}, {"coordinate", 0}, {"scale", 2.0}},
                                           Json{{"curve", "alpha2"}, {"coordinate", 1}}})},
                   {"incidence", Json{{"alpha1", {"alpha1", "alpha2"}}}}};
  s = parse_field_spec(j);
  CHECK(s.push.base(Eigen::Vector2d(2.0, 3.0), 0)(0) == 4.0);
  CHECK(s.push.incidence[0].size() == 2);

  j["push"] = Json{{"preset", "custom"}, {"fields", Json::array({Json{{"curve", "alpha1"}, {"coordinate", 0}}})}};
  CHECK_THROWS_WITH_AS(parse_field_spec(j), doctest::Contains("malformed"), Error);

  j.erase("push");
  j["rays"] = Json::array({Json{{"name", "b->0.5"}, {"base", {0.5, 2.0}}, {"slope", {1.0, 0.0}}}});
  s = parse_field_spec(j);
  REQUIRE(s.rays.size() == 1);
  CHECK(s.rays[0].at(0.01)(0) == doctest::Approx(0.51));

  j["pairing"] = Json{{"alpha1", "alpha2"}, {"alpha2", "alpha1"}};
  s = parse_field_spec(j);
  CHECK(s.field.curves().pairing[0] == 1);
}

TEST_CASE("table field spec") {
  const Json j{{"family", "table"},
               {"params", {"x"}},
               {"axes", {{0.0, 1.0, 2.0}}},
               {"curves", {"g"}},
               {"values_I", {{1.0, 2.0, 4.0}}},
               {"values_II", {{3.0, 2.0, 1.5}}}};
  const FamilySetup s = parse_field_spec(j);
  CHECK(s.field.assignment(Side::I).provenance == Provenance::table);
  CHECK(s.field.mismatch(Eigen::VectorXd::Constant(1, 1.0), 0) == doctest::Approx(0.0));
}

TEST_CASE("json numbers use 17 significant digits in fixed key order") {
  Json j;
  j["z"] = 0.1;
  j["a"] = 3;
  j["n"] = std::numeric_limits<double>::quiet_NaN();
  j["v"] = Json::array({1.5, 2.0});
  CHECK(dump_json(j) == "{\n  \"z\": 0.10000000000000001,\n  \"a\": 3,\n  \"n\": null,\n  \"v\": [1.5, 2]\n}\n");
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("serialized reports keep the documented keys") {
  AuditReport r;
  r.hypothesis = Hypothesis::H2;
  r.verdict = Verdict::fail;
  r.thresholds = {{"blow_threshold", 5.0}};
  r.seed = 7;
  Evidence e;
  e.point = Eigen::Vector2d(1.0, 2.0);
  e.quantities = {{"max_abs_m", 0.5}};
  e.witness = true;
  r.evidence.push_back(e);
  const Json j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"hypothesis", "verdict", "thresholds", "evidence", "seed", "message"});
  CHECK(j["evidence"][0]["point"][1] == 2.0);
  CHECK(j["seed"] == 7);
}

TEST_CASE("trace CSV") {
  SolveResult r;
  r.trace.push_back({Eigen::Vector2d(1.0, 2.0), 0.5, "", 0.0});
  r.trace.push_back({Eigen::Vector2d(1.5, 2.0), 0.25, "alpha1", 1.0});
  std::ostringstream os;
  write_trace_csv(os, r, {"b", "c"});
  CHECK(os.str() == "iter,b,c,H,curve\n0,1,2,0.5,\n1,1.5,2,0.25,alpha1\n");
}

TEST_CASE("command-line vectors and boxes") {
  CHECK(parse_vector("2.5, 0.8").isApprox(Eigen::Vector2d(2.5, 0.8)));
  CHECK_THROWS_WITH_AS(parse_vector("2.5,x"), doctest::Contains("malformed"), Error);
  CHECK_THROWS_AS(parse_vector(""), Error);
  const Box b = parse_box("0.6:3,0.5:2");
  CHECK(b.lo(1) == 0.5);
  CHECK(b.hi(0) == 3.0);
  CHECK_THROWS_AS(parse_box("3:0.6"), Error);
  CHECK_THROWS_AS(parse_box("0.6-3"), Error);
}
