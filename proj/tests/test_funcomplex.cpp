#include <doctest.h>

#include "gentle/funcomplex.hpp"

using namespace gentle;
using namespace gentle::simp;

TEST_CASE("map enumeration counts") {
  CrewPtr s1 = sphere(1);
  ModulePtr em21 = em_module(2, 1, 3);
  SUBCASE("circle into em(2,1): exactly 2 maps") {
    auto maps = enumerate_maps(s1, module_target(em21));
    CHECK(maps.size() == 2);
  }
  SUBCASE("point into anything: exactly 1 map") {
    auto maps = enumerate_maps(point_crew(), module_target(em21));
    CHECK(maps.size() == 1);
  }
  SUBCASE("wedge of two circles: independent choices, 4 maps") {
    auto w = wedge({s1, s1});
    auto maps = enumerate_maps(w.crew, module_target(em21));
    CHECK(maps.size() == 4);
  }
  SUBCASE("circle into em(3,1): 3 maps") {
    ModulePtr em31 = em_module(3, 1, 3);
    CHECK(enumerate_maps(s1, module_target(em31)).size() == 3);
  }
  SUBCASE("crew target: self-maps of the minimal circle") {
    auto maps = enumerate_maps(s1, crew_target(s1));
    CHECK(maps.size() == 2);  // identity and constant
  }
  SUBCASE("bijection with chain maps") {
    // the vertex count equals p^(dim of the chain-map space)
    ChainMapSpace sp = chain_map_space(*s1, em21->complex());
    std::size_t expected = 1;
    for (std::size_t i = 0; i < sp.chain_maps.rows; ++i) expected *= 2;
    CHECK(enumerate_maps(s1, module_target(em21)).size() == expected);
  }
}

TEST_CASE("pi0 of function complexes") {
  CrewPtr s1 = sphere(1);
  SUBCASE("circle / em(2,1): two classes forming Z_2") {
    Pi0 c = pi0(s1, module_target(em_module(2, 1, 3)));
    CHECK(c.class_count() == 2);
    CHECK(c.cross_check_ok);
    REQUIRE(c.has_module_structure);
    uint32_t nz = c.zero_class == 0 ? 1 : 0;
    CHECK(c.class_add[nz][nz] == c.zero_class);
  }
  SUBCASE("circle / em(3,1): three classes forming Z_3") {
    Pi0 c = pi0(s1, module_target(em_module(3, 1, 3)));
    CHECK(c.class_count() == 3);
    CHECK(c.cross_check_ok);
    uint32_t g = c.zero_class == 0 ? 1 : 0;
    uint32_t twog = c.class_add[g][g];
    CHECK(twog != g);
    CHECK(twog != c.zero_class);
    CHECK(c.class_add[twog][g] == c.zero_class);
  }
  SUBCASE("sphere / em of matching degree: p classes") {
    Pi0 c = pi0(sphere(2), module_target(em_module(2, 2, 4)));
    CHECK(c.class_count() == 2);
    CHECK(c.cross_check_ok);
  }
  SUBCASE("mismatch in degree collapses to one class") {
    Pi0 c = pi0(s1, module_target(em_module(2, 2, 3)));
    CHECK(c.class_count() == 1);
    CHECK(c.cross_check_ok);
  }
  SUBCASE("point target: one class") {
    Pi0 c = pi0(s1, crew_target(point_crew()));
    CHECK(c.class_count() == 1);
  }
  SUBCASE("torus / em(2,1): four classes, all separate") {
    auto t = power(s1, 2);
    Pi0 c = pi0(t.crew, module_target(em_module(2, 1, 4)));
    CHECK(c.slice.vertices.size() == 4);
    CHECK(c.class_count() == 4);
    CHECK(c.cross_check_ok);
  }
  SUBCASE("torus / em(2,2): four vertices, two classes") {
    auto t = power(s1, 2);
    Pi0 c = pi0(t.crew, module_target(em_module(2, 2, 4)));
    CHECK(c.slice.vertices.size() == 4);
    CHECK(c.class_count() == 2);
    CHECK(c.cross_check_ok);
  }
}

TEST_CASE("homotopy edges respect classes") {
  // every enumerated homotopy joins vertices that the chain route also joins
  Pi0 c = pi0(sphere(1), module_target(em_module(3, 1, 3)));
  for (auto& [a, b] : c.slice.edges) CHECK(c.class_of[a] == c.class_of[b]);
}
