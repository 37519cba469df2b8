#include <doctest.h>

#include "gentle/invariants.hpp"

using namespace gentle;
using namespace gentle::inv;
using namespace gentle::simp;

namespace {

InvariantTable table_of(const Pi0& classes, std::vector<uint32_t> values) {
  InvariantTable t;
  t.context = &classes;
  t.values = std::move(values);
  return t;
}

}  // namespace

TEST_CASE("power transform basics on circle / em(2,1)") {
  SliceAnalysis a(sphere(1), module_target(em_module(2, 1, 5)), Caps{});
  const auto& s = a.slice();
  REQUIRE(s.vertices.size() == 2);

  SUBCASE("power zero is the augmentation times the point") {
    gf::SparseVector B = gf::SparseVector::unit(s.vertex_basis, 2, 0);
    ChainTransform t = power_transform(a, 0, B);
    REQUIRE(t.assign.count(0) == 1);
    CHECK(t.assign.at(0).front().second.size() == 1);
    // augmentation zero gives the zero transform
    gf::SparseVector D = gf::SparseVector::unit(s.vertex_basis, 2, 0)
                             .minus(gf::SparseVector::unit(s.vertex_basis, 2, 1));
    ChainTransform tz = power_transform(a, 0, D);
    CHECK(tz.assign.at(0).front().second.empty());
  }
  SUBCASE("zero chain maps to the zero transform") {
    ChainTransform t = power_transform(a, 1, gf::SparseVector::zero(s.vertex_basis, 2));
    for (auto& [q, list] : t.assign) CHECK(list.empty());
  }
  SUBCASE("the nonconstant map sends the edge to the nonzero 1-simplex") {
    // vertex m1 is the nonconstant map (images sorted, zero map first)
    gf::SparseVector B = gf::SparseVector::unit(s.vertex_basis, 2, 1);
    ChainTransform t = power_transform(a, 1, B);
    REQUIRE(t.assign.count(1) == 1);
    bool found_edge = false;
    for (auto& [k, chain] : t.assign.at(1)) {
      if (k.find("cell") != std::string::npos && !chain.empty()) found_edge = true;
    }
    CHECK(found_edge);
  }
  SUBCASE("kernels: augmentation ideal at r=0, zero at r=1") {
    CHECK(a.power_kernel(0).rank() == 1);
    CHECK(a.power_kernel(0).contains_dense({1, 1}));
    CHECK(a.power_kernel(1).rank() == 0);
  }
  SUBCASE("stabilization radius is 1") {
    auto r = a.stabilization_r(4);
    REQUIRE(r.has_value());
    CHECK(*r == 1);
  }
}

TEST_CASE("class projection") {
  SliceAnalysis a(sphere(1), module_target(em_module(2, 1, 5)), Caps{});
  const Pi0& c = a.classes();
  REQUIRE(c.class_count() == 2);
  gf::SparseVector B = gf::SparseVector::unit(c.slice.vertex_basis, 2, 0);
  auto v = class_projection(c, B);
  CHECK(v[c.class_of[0]] == 1);
  // a difference within one class dies; here both classes are singletons, so
  // check the two-vertex difference instead: it survives
  gf::SparseVector D = gf::SparseVector::unit(c.slice.vertex_basis, 2, 0)
                           .minus(gf::SparseVector::unit(c.slice.vertex_basis, 2, 1));
  auto w = class_projection(c, D);
  CHECK((w[0] != 0 || w[1] != 0));
  // the class projection is injective here: charges match vertex counts
  CHECK(a.class_kernel().rank() == 0);
}

TEST_CASE("kernel monotonicity via padding") {
  for (auto tref : {std::pair{2u, 1u}, std::pair{3u, 1u}}) {
    SliceAnalysis a(sphere(1), module_target(em_module(tref.first, tref.second, 6)), Caps{});
    for (uint32_t r = 0; r < 3; ++r) CHECK(gf::subspace_leq(a.power_kernel(r + 1), a.power_kernel(r)).holds);
  }
}

TEST_CASE("simplicial degree") {
  SliceAnalysis a(sphere(1), module_target(em_module(2, 1, 5)), Caps{});
  const Pi0& c = a.classes();
  SUBCASE("constants have degree zero") {
    auto d = a.simplicial_degree(table_of(c, {1, 1}), 4);
    REQUIRE(d.degree.has_value());
    CHECK(*d.degree == 0);
  }
  SUBCASE("the identity table has degree one with a verified functional") {
    auto d = a.simplicial_degree(table_of(c, {0, 1}), 4);
    REQUIRE(d.degree.has_value());
    CHECK(*d.degree == 1);
    CHECK(d.functional_verified);
  }
  SUBCASE("adding a constant never changes the degree") {
    auto d0 = a.simplicial_degree(table_of(c, {0, 1}), 4);
    auto d1 = a.simplicial_degree(table_of(c, {1, 0}), 4);  // 1 + identity mod 2
    CHECK(d0.degree == d1.degree);
  }
  SUBCASE("r_max zero reports exceeded for nonconstant tables") {
    auto d = a.simplicial_degree(table_of(c, {0, 1}), 0);
    CHECK(!d.degree.has_value());
  }
}

TEST_CASE("separation") {
  SliceAnalysis a(sphere(1), module_target(em_module(2, 1, 5)), Caps{});
  SUBCASE("the two classes separate at r = 1") {
    auto sep = a.separate(0, 1, 4);
    REQUIRE(sep.has_value());
    CHECK(sep->r == 1);
    CHECK(sep->table.values[0] != sep->table.values[1]);
    auto deg = a.simplicial_degree(sep->table, 4);
    REQUIRE(deg.degree.has_value());
    CHECK(*deg.degree <= 1);
  }
  SUBCASE("equal classes are an input error") { CHECK_THROWS_AS(a.separate(1, 1, 4), input_error); }
}

TEST_CASE("every class pair separates by the stabilization radius") {
  for (uint32_t p : {2u, 3u}) {
    SliceAnalysis a(sphere(1), module_target(em_module(p, 1, 5)), Caps{});
    auto stab = a.stabilization_r(4);
    REQUIRE(stab.has_value());
    for (uint32_t c1 = 0; c1 < a.classes().class_count(); ++c1)
      for (uint32_t c2 = c1 + 1; c2 < a.classes().class_count(); ++c2) {
        auto sep = a.separate(c1, c2, 4);
        REQUIRE(sep.has_value());
        CHECK(sep->r <= *stab);
        CHECK(sep->table.values[c1] != sep->table.values[c2]);
      }
  }
}

TEST_CASE("enumeration caps are explicit outcomes") {
  Caps tiny;
  tiny.max_maps = 2;
  CHECK_THROWS_AS(SliceAnalysis(power(sphere(1), 2).crew, module_target(em_module(3, 1, 4)), tiny), cap_error);
}

TEST_CASE("kernel inside the augmentation power of the vertex group") {
  SliceAnalysis a(sphere(1), module_target(em_module(2, 1, 5)), Caps{});
  SUBCASE("r = 1: zero kernel, trivial containment") {
    auto res = check_cor_7_2(a, 1);
    CHECK(res.holds);
    CHECK(res.kernel_dim == 0);
  }
  SUBCASE("r = 0: kernel equals the augmentation ideal") {
    auto res = check_cor_7_2(a, 0);
    CHECK(res.holds);
    CHECK(res.kernel_dim == 1);
    CHECK(res.ideal_dim == 1);
  }
  SUBCASE("point source") {
    SliceAnalysis ap(point_crew(), module_target(em_module(2, 1, 2)), Caps{});
    auto res = check_cor_7_2(ap, 1);
    CHECK(res.holds);
  }
}

TEST_CASE("wedge cancellation") {
  CrewPtr s1 = sphere(1);
  SUBCASE("two circles, r = 1, through dimension 2") {
    for (uint32_t p : {2u, 3u}) {
      auto res = check_lemma_12_1({s1, s1}, 1, 2, p);
      CHECK(res.holds);
      CHECK(res.simplices_checked > 0);
    }
  }
  SUBCASE("three circles, r = 2, through dimension 2") {
    auto res = check_lemma_12_1({s1, s1, s1}, 2, 2, 3);
    CHECK(res.holds);
  }
  SUBCASE("summand count must match") {
    CHECK_THROWS_AS(check_lemma_12_1({s1, s1}, 2, 1, 2), input_error);
  }
}

TEST_CASE("polynomial bound against simplicial degree") {
  SUBCASE("p = 2: all four tables satisfy the bound") {
    auto res = check_lemma_12_2(2, 1);
    CHECK(res.holds);
    CHECK(res.tables_checked == 4);
  }
  SUBCASE("p = 3: the minimal model is too fine; quadratics violate the bound") {
    // ker of the first power transform is already zero on the minimal
    // circle, so every table has simplicial degree <= 1 while quadratic
    // tables have polynomial degree 2
    auto res = check_lemma_12_2(3, 1);
    CHECK(!res.holds);
    CHECK(res.tables_checked == 27);
    CHECK(res.violations.size() == 18);
    for (const auto& v : res.violations) {
      CHECK(v.gentle_degree == 2);
      REQUIRE(v.simp_degree.has_value());
      CHECK(*v.simp_degree == 1);
    }
  }
}

TEST_CASE("composition cannot raise the degree") {
  Caps caps;
  SliceAnalysis base(sphere(1), module_target(em_module(2, 1, 5)), caps);
  SliceAnalysis tilde(sphere(1), module_target(em_module(2, 1, 5)), caps);
  ModulePtr em = em_module(2, 1, 5);
  SUBCASE("identity everything gives equality") {
    CrewMap k = identity_crew_map(sphere(1));
    // note: analyses hold their own crews; rebuild k over the base crew
    k.src = base.slice().K;
    k.dst = tilde.slice().K;
    ModuleHom h = scalar_module_hom(base.slice().T.module, 1);
    InvariantTable f = table_of(base.classes(), {0, 1});
    auto res = check_lemma_10_1(base, tilde, k, h, f);
    CHECK(res.holds);
    CHECK(res.deg_f == res.deg_f_tilde);
  }
  SUBCASE("constant target map collapses the degree to zero") {
    CrewMap k = identity_crew_map(sphere(1));
    k.src = base.slice().K;
    k.dst = tilde.slice().K;
    ModuleHom h = scalar_module_hom(base.slice().T.module, 0);
    InvariantTable f = table_of(base.classes(), {0, 1});
    auto res = check_lemma_10_1(base, tilde, k, h, f);
    CHECK(res.holds);
    REQUIRE(res.deg_f_tilde.has_value());
    CHECK(*res.deg_f_tilde == 0);
  }
  SUBCASE("wedge fold") {
    auto w = wedge({sphere(1), sphere(1)});
    SliceAnalysis wa(w.crew, module_target(em), caps);
    // k: circle -> wedge as the first inclusion
    CrewMap k = w.inclusions[0];
    ModuleHom h = scalar_module_hom(em, 1);
    // f on [S1, em] has degree 1; the induced table on the wedge side obeys
    // the bound
    SliceAnalysis s1a(sphere(1), module_target(em), caps);
    k.src = s1a.slice().K;
    InvariantTable f = table_of(s1a.classes(), {0, 1});
    auto res = check_lemma_10_1(s1a, wa, k, h, f);
    CHECK(res.holds);
  }
}

TEST_CASE("power kernel agrees with brute force over the transform route") {
  // decide membership of every 0-chain by materializing its transform and
  // checking that every assigned chain is empty
  for (uint32_t p : {2u, 3u}) {
    SliceAnalysis a(sphere(1), module_target(em_module(p, 1, 5)), Caps{});
    const auto& s = a.slice();
    std::size_t total = 1;
    for (std::size_t i = 0; i < s.vertices.size(); ++i) total *= p;
    for (uint32_t r : {1u, 2u}) {
      const gf::Subspace& ker = a.power_kernel(r);
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<uint32_t> dense(s.vertices.size());
        std::size_t c = code;
        for (auto& v : dense) {
          v = static_cast<uint32_t>(c % p);
          c /= p;
        }
        gf::SparseVector B = gf::SparseVector::from_dense(s.vertex_basis, p, dense);
        ChainTransform t = power_transform(a, r, B);
        bool vanishes = true;
        for (auto& [q, list] : t.assign)
          for (auto& [k, chain] : list)
            if (!chain.empty()) vanishes = false;
        CHECK(ker.contains_dense(dense) == vanishes);
      }
    }
  }
}

TEST_CASE("class projection kills homotopy pairs") {
  for (uint32_t p : {2u, 3u}) {
    Pi0 c = pi0(power(sphere(1), 2).crew, module_target(em_module(p, 1, 4)));
    for (auto& [a, b] : c.slice.edges) {
      gf::SparseVector d = gf::SparseVector::unit(c.slice.vertex_basis, p, a)
                               .minus(gf::SparseVector::unit(c.slice.vertex_basis, p, b));
      auto v = class_projection(c, d);
      CHECK(std::all_of(v.begin(), v.end(), [](uint32_t x) { return x == 0; }));
    }
  }
}

TEST_CASE("power transform is linear") {
  SliceAnalysis a(sphere(1), module_target(em_module(3, 1, 5)), Caps{});
  const auto& s = a.slice();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<uint32_t> x(s.vertices.size()), y(s.vertices.size());
    for (auto& v : x) v = static_cast<uint32_t>(rng() % 3);
    for (auto& v : y) v = static_cast<uint32_t>(rng() % 3);
    gf::SparseVector B = gf::SparseVector::from_dense(s.vertex_basis, 3, x);
    gf::SparseVector C = gf::SparseVector::from_dense(s.vertex_basis, 3, y);
    ChainTransform tsum = power_transform(a, 1, B.plus(C));
    ChainTransform tb = power_transform(a, 1, B);
    ChainTransform tc = power_transform(a, 1, C);
    // compare entrywise: coefficients of the sum match the summed chains
    gf::PrimeField F(3);
    for (auto& [q, list] : tsum.assign) {
      for (auto& [k, chain] : list) {
        for (auto& [label, coeff] : chain) {
          uint32_t expect = 0;
          for (const ChainTransform* t : {&tb, &tc}) {
            auto it = t->assign.find(q);
            if (it == t->assign.end()) continue;
            for (auto& [k2, chain2] : it->second) {
              if (k2 != k) continue;
              for (auto& [l2, c2] : chain2)
                if (l2 == label) expect = F.add(expect, c2);
            }
          }
          CHECK(coeff == expect);
        }
      }
    }
  }
}

TEST_CASE("degree-zero chains of powers are tuples of vertices") {
  // on a crew with two vertices the r-th power has 2^r vertices
  CrewPtr d1 = standard_simplex_1();
  auto p2 = power(d1, 2);
  CHECK(p2.crew->count(0) == 4);
  auto p3 = power(d1, 3);
  CHECK(p3.crew->count(0) == 8);
  ch::ChainComplex c = normalized_chains(*p2.crew, 2, 0);
  CHECK(c.ranks[0] == 4);
}

TEST_CASE("crew-target analysis supports the point") {
  SliceAnalysis a(sphere(1), crew_target(point_crew()), Caps{});
  auto r = a.stabilization_r(4);
  REQUIRE(r.has_value());
  CHECK(*r == 0);
}
