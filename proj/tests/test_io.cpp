#include <doctest.h>

#include "gentle/io.hpp"
#include "gentle/suites.hpp"

using namespace gentle;
using namespace gentle::cli;

TEST_CASE("crew JSON round trip") {
  simp::CrewPtr t = simp::power(simp::sphere(1), 2).crew;
  json j = crew_to_json(*t);
  simp::CrewPtr back = crew_from_json(j, "torus");
  CHECK(back->count(0) == 1);
  CHECK(back->count(1) == 3);
  CHECK(back->count(2) == 2);
  CHECK(back->validate().empty());
  // a second round trip is bytewise stable
  CHECK(crew_to_json(*back).dump() == j.dump());
}

TEST_CASE("crew JSON validation errors") {
  SUBCASE("missing face") {
    json j = {{"basepoint", "v"},
              {"simplices",
               {{"0", {{{"name", "v"}}}},
                {"1", {{{"name", "e"}, {"faces", {{{"word", json::array()}, {"target", "v"}}}}}}}}}};
    CHECK_THROWS_AS(crew_from_json(j, "bad"), input_error);
  }
  SUBCASE("out-of-range degeneracy word names the simplex") {
    json j = {{"basepoint", "v"},
              {"simplices",
               {{"0", {{{"name", "v"}}}},
                {"1",
                 {{{"name", "e"},
                   {"faces",
                    {{{"word", {7}}, {"target", "v"}}, {{"word", json::array()}, {"target", "v"}}}}}}}}}};
    try {
      crew_from_json(j, "bad");
      FAIL("expected an error");
    } catch (const input_error& e) {
      CHECK(std::string(e.what()).find("e") != std::string::npos);
    }
  }
}

TEST_CASE("chain complex JSON") {
  ch::ChainComplex c = ch::cone_complex(3, 1);
  json j = complex_to_json(c);
  ch::ChainComplex back = complex_from_json(j);
  CHECK(back == c);
  SUBCASE("bad differential shapes are rejected") {
    json bad = j;
    bad["d"]["2"] = json::array({json::array({1, 2})});
    CHECK_THROWS_AS(complex_from_json(bad), input_error);
  }
}

TEST_CASE("complex map JSON") {
  ch::ChainComplex src = ch::cone_complex(2, 1);
  ch::ChainComplex dst = ch::concentrated(2, 2);
  ch::ComplexMap m;
  m.src = &src;
  m.dst = &dst;
  m.f = {gf::Mat(2, 0, 0), gf::Mat(2, 0, 1), gf::Mat::identity(2, 1)};
  json j = complex_map_to_json(m);
  ch::ComplexMap back = complex_map_from_json(j, src, dst);
  CHECK(map_equal(back, m));
  SUBCASE("maps that break the chain condition are rejected") {
    // target concentrated in degree 1 cannot absorb the cone identity
    ch::ChainComplex bad_dst = ch::concentrated(2, 1);
    json bj;
    bj["f"]["1"] = json::array({json::array({1})});
    CHECK_THROWS_AS(complex_map_from_json(bj, src, bad_dst), input_error);
  }
}

TEST_CASE("reference grammar") {
  Caps caps;
  CHECK(resolve_ref("point", 4).crew->total_count() == 1);
  CHECK(resolve_ref("sphere:2", 4).crew->count(2) == 1);
  CHECK(resolve_ref("em:2,1", 4).module->p() == 2);
  CHECK(resolve_ref("wedge:(sphere:1,sphere:1)", 4).crew->count(1) == 2);
  CHECK(resolve_ref("power:(sphere:1,2)", 4).crew->count(2) == 2);
  CHECK(resolve_ref("cyl:sphere:1", 4).crew->count(1) == 3);
  CHECK_THROWS_AS(resolve_ref("missing", 4), input_error);
  CHECK_THROWS_AS(resolve_ref("wedge:(em:2,1,em:2,1)", 4), input_error);
}

TEST_CASE("invariant table parsing") {
  simp::Pi0 classes = simp::pi0(simp::sphere(1), simp::module_target(simp::em_module(2, 1, 3)));
  REQUIRE(classes.class_count() == 2);
  json good = {{"values", {{classes.class_name(0), 0}, {classes.class_name(1), 1}}}};
  auto values = invariant_from_json(good, classes);
  CHECK(values.size() == 2);
  SUBCASE("missing classes are listed") {
    json partial = {{"values", {{classes.class_name(0), 0}}}};
    try {
      invariant_from_json(partial, classes);
      FAIL("expected an error");
    } catch (const input_error& e) {
      CHECK(std::string(e.what()).find(classes.class_name(1)) != std::string::npos);
    }
  }
  SUBCASE("unknown names are rejected") {
    json bad = {{"values", {{"nope", 0}}}};
    CHECK_THROWS_AS(invariant_from_json(bad, classes), input_error);
  }
  SUBCASE("values reduce modulo p") {
    json wrap = {{"values", {{classes.class_name(0), -1}, {classes.class_name(1), 5}}}};
    auto v = invariant_from_json(wrap, classes);
    CHECK(v[0] == 1);
    CHECK(v[1] == 1);
  }
}

TEST_CASE("group JSON") {
  json j = {{"cyclic_orders", {2, 3}}};
  grp::GroupPtr g = group_from_json(j);
  CHECK(g->size() == 6);
  json f = {{"p", 2},
            {"values",
             {{"(0,0)", 0}, {"(0,1)", 1}, {"(0,2)", 0}, {"(1,0)", 1}, {"(1,1)", 0}, {"(1,2)", 1}}}};
  grp::GroupFunction fn = group_function_from_json(f, g);
  CHECK(fn.values.size() == 6);
}

TEST_CASE("reports are deterministic") {
  Report r;
  r.command = "suite lemma-3";
  r.seed = 7;
  r.checks.push_back(CheckResult{"x", true, json::object(), 123});
  std::string a = r.to_json().dump(2);
  r.checks[0].ms = 9999;  // timings never reach the machine-readable form
  std::string b = r.to_json().dump(2);
  CHECK(a == b);
  CHECK(r.to_text().find("9999") != std::string::npos);
}
