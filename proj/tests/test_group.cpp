#include <doctest.h>

#include <random>
#include <set>

#include "gentle/group.hpp"

using namespace gentle;
using namespace gentle::grp;

namespace {

GroupFunction table_fn(GroupPtr g, uint32_t p, std::vector<uint32_t> values) {
  return GroupFunction{std::move(g), p, std::move(values)};
}

// Independent oracle: evaluate the linear extension on every product
// generator (1-[g_1])...(1-[g_s]) by direct expansion.
bool defect_oracle(const GroupFunction& f, uint32_t r) {
  GroupPtr g = f.domain;
  uint32_t p = f.codomain_p;
  std::size_t n = g->size();
  std::vector<GroupRingElt> frontier = {GroupRingElt::one(g, p)};
  for (uint32_t step = 0; step <= r; ++step) {
    std::vector<GroupRingElt> next;
    for (const auto& x : frontier)
      for (uint32_t e = 0; e < n; ++e) next.push_back(x.one_minus_g_times(e));
    frontier = std::move(next);
  }
  for (const auto& x : frontier)
    if (linear_extension(f, x) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("group construction and laws") {
  GroupPtr z6 = abelian_group({6});
  CHECK(z6->size() == 6);
  CHECK(z6->order_of(z6->element_from_residues({3})) == 2);
  CHECK(z6->order_of(z6->element_from_residues({2})) == 3);
  GroupPtr a5 = alternating_5();
  CHECK(a5->size() == 60);
  CHECK(!a5->is_abelian());
  CHECK(abelian_group({2, 3})->is_abelian());
  // malformed table
  CHECK_THROWS_AS(group_from_table("bad", {"a", "b"}, {0, 0, 0, 0}), input_error);
}

TEST_CASE("augmentation") {
  GroupPtr z3 = cyclic_group(3);
  auto g1 = GroupRingElt::basic(z3, 3, 1);
  CHECK(augmentation(g1).value == 1);
  CHECK(augmentation(GroupRingElt::zero(z3, 3)).value == 0);
  CHECK(augmentation(g1.minus(GroupRingElt::basic(z3, 3, 2))).value == 0);
}

TEST_CASE("ideal powers of small cyclic groups") {
  SUBCASE("Z2 at p=2: dims 1, 0") {
    AugFiltration f = aug_ideal_powers(cyclic_group(2), 2);
    CHECK(f.power(1).rank() == 1);
    CHECK(f.power(2).rank() == 0);
    CHECK(f.stable_index.has_value());
    // direct expansion oracle: (1-[g])^2 = 0 mod 2
    GroupPtr z2 = cyclic_group(2);
    GroupRingElt x = GroupRingElt::one(z2, 2).one_minus_g_times(1).one_minus_g_times(1);
    CHECK(x.coeffs.is_zero());
  }
  SUBCASE("trivial group") {
    AugFiltration f = aug_ideal_powers(trivial_group(), 2);
    CHECK(f.power(1).rank() == 0);
  }
  SUBCASE("Z3 at p=3: dims 2, 1, 0") {
    AugFiltration f = aug_ideal_powers(cyclic_group(3), 3);
    CHECK(f.power(1).rank() == 2);
    CHECK(f.power(2).rank() == 1);
    CHECK(f.power(3).rank() == 0);
  }
  SUBCASE("filtration descent and ideal property (Z6 at p=3)") {
    GroupPtr z6 = abelian_group({6});
    AugFiltration f = aug_ideal_powers(z6, 3);
    for (std::size_t s = 1; s + 1 <= f.powers.size(); ++s)
      CHECK(gf::subspace_leq(f.power(s + 1), f.power(s)).holds);
    // [g] I^s <= I^s and (1-[g]) I^s <= I^{s+1}
    for (std::size_t s = 1; s <= f.powers.size(); ++s) {
      const gf::Subspace& is = f.power(s);
      for (uint32_t g = 0; g < z6->size(); ++g) {
        for (std::size_t i = 0; i < is.rank(); ++i) {
          GroupRingElt row{z6, is.row(i)};
          GroupRingElt gx = GroupRingElt::basic(z6, 3, g).times(row);
          CHECK(is.contains(gx.coeffs));
          GroupRingElt step = row.one_minus_g_times(g);
          CHECK(f.power(s + 1 <= f.powers.size() ? s + 1 : s).contains(step.coeffs));
        }
      }
    }
  }
}

TEST_CASE("filtration dimensions match the truncated polynomial ring") {
  // F_p[Z_p^m] is the truncated polynomial ring on m variables with
  // exponents below p; the s-th ideal power is spanned by the monomials of
  // total degree at least s
  auto monomials_of_degree_at_least = [](uint32_t p, uint32_t m, uint32_t s) {
    std::size_t count = 0;
    std::vector<uint32_t> e(m, 0);
    while (true) {
      uint32_t deg = 0;
      for (auto x : e) deg += x;
      if (deg >= s) ++count;
      std::size_t i = m;
      bool done = true;
      while (i-- > 0) {
        if (++e[i] < p) {
          done = false;
          break;
        }
        e[i] = 0;
        if (i == 0) break;
      }
      if (done) break;
    }
    return count;
  };
  for (auto [p, m] : {std::pair{2u, 2u}, std::pair{2u, 3u}, std::pair{3u, 2u}}) {
    AugFiltration f = aug_ideal_powers(abelian_group(std::vector<uint32_t>(m, p)), p);
    uint32_t top = (p - 1) * m;
    for (uint32_t s = 1; s <= top + 1; ++s)
      CHECK(f.power(s).rank() == monomials_of_degree_at_least(p, m, s));
  }
}

TEST_CASE("nilpotency bound for elementary abelian groups") {
  auto r21 = check_lemma_3_1(2, 1);
  CHECK(r21.top_vanishes);
  CHECK(r21.sharp);
  auto r23 = check_lemma_3_1(2, 3);
  CHECK(r23.top_vanishes);  // I^4 = 0
  CHECK(r23.sharp);
  auto r32 = check_lemma_3_1(3, 2);
  CHECK(r32.top_vanishes);  // I^5 = 0
  CHECK(r32.sharp);
  CHECK_THROWS_AS(check_lemma_3_1(2, 9), cap_error);
}

TEST_CASE("gentle defect and degree") {
  GroupPtr z2 = cyclic_group(2);
  GroupPtr z3 = cyclic_group(3);
  SUBCASE("constants are 0-gentle") {
    auto f = GroupFunction::constant(z3, 3, 2);
    CHECK(gentle_defect(f, 0).vanishes);
    CHECK(gentle_degree(f).degree == 0u);
  }
  SUBCASE("identity on Z2") {
    auto f = table_fn(z2, 2, {0, 1});
    auto d0 = gentle_defect(f, 0);
    CHECK(!d0.vanishes);
    REQUIRE(d0.witness.size() == 1);
    CHECK(d0.witness[0] == 1);  // 1 - [g]
    CHECK(gentle_defect(f, 1).vanishes);
    CHECK(gentle_degree(f).degree == 1u);
  }
  SUBCASE("squaring on Z3 has degree 2") {
    auto f = table_fn(z3, 3, {0, 1, 1});  // x^2 mod 3
    CHECK(!gentle_defect(f, 1).vanishes);
    CHECK(gentle_defect(f, 2).vanishes);
    CHECK(gentle_degree(f).degree == 2u);
    // oracle: direct expansion over all generators
    CHECK(!defect_oracle(f, 1));
    CHECK(defect_oracle(f, 2));
  }
  SUBCASE("witness products evaluate nonzero") {
    auto f = table_fn(z3, 3, {0, 1, 1});
    auto d = gentle_defect(f, 1);
    REQUIRE(!d.vanishes);
    REQUIRE(d.witness.size() == 2);
    GroupRingElt x = GroupRingElt::one(z3, 3);
    for (auto g : d.witness) x = x.one_minus_g_times(g);
    CHECK(linear_extension(f, x) != 0);
  }
  SUBCASE("monotone consistency") {
    auto f = table_fn(z3, 3, {0, 1, 1});
    AugFiltration filt = aug_ideal_powers(z3, 3);
    bool prev = false;
    for (uint32_t r = 0; r <= 4; ++r) {
      bool cur = gentle_defect(f, r, filt).vanishes;
      if (prev) CHECK(cur);
      prev = cur;
    }
  }
  SUBCASE("every function on Z2^2 has degree at most 2") {
    GroupPtr g = abelian_group({2, 2});
    AugFiltration filt = aug_ideal_powers(g, 2);
    for (uint32_t code = 0; code < 16; ++code) {
      GroupFunction f{g, 2, {(code >> 0) & 1, (code >> 1) & 1, (code >> 2) & 1, (code >> 3) & 1}};
      auto d = gentle_degree(f, filt);
      REQUIRE(d.degree.has_value());
      CHECK(*d.degree <= 2);
    }
  }
  SUBCASE("homomorphisms are 1-gentle; 0-gentle means constant") {
    for (uint32_t a = 0; a < 3; ++a) {
      GroupFunction f{z3, 3, {0, a, (2 * a) % 3}};
      auto d = gentle_degree(f);
      REQUIRE(d.degree.has_value());
      CHECK(*d.degree <= 1);
      if (*d.degree == 0) {
        CHECK(f.values[0] == f.values[1]);
        CHECK(f.values[1] == f.values[2]);
      }
    }
  }
}

TEST_CASE("composition bound") {
  GroupPtr z3 = cyclic_group(3);
  SUBCASE("homomorphisms compose to 1-gentle") {
    auto f = table_fn(z3, 3, {0, 1, 2});
    auto res = check_composition_bound(f, f);
    CHECK(res.r == 1);
    CHECK(res.s == 1);
    CHECK(res.holds);
  }
  SUBCASE("squares compose within degree 4") {
    auto f = table_fn(z3, 3, {0, 1, 1});
    auto res = check_composition_bound(f, f);
    CHECK(res.r == 2);
    CHECK(res.s == 2);
    CHECK(res.holds);
  }
  SUBCASE("constant absorbs everything") {
    auto c = GroupFunction::constant(z3, 3, 1);
    auto g = table_fn(z3, 3, {0, 1, 1});
    auto res = check_composition_bound(c, g);
    CHECK(res.r == 0);
    CHECK(res.holds);
  }
}

TEST_CASE("pushforward") {
  GroupPtr z3 = cyclic_group(3);
  SUBCASE("identity map") {
    auto f = table_fn(z3, 3, {0, 1, 2});
    gf::Mat m = pushforward_matrix(f, cyclic_group(3), 3);
    CHECK(m == gf::Mat::identity(3, 3));
  }
  SUBCASE("constant collapses to one column pattern") {
    auto f = GroupFunction::constant(z3, 3, 0);
    gf::Mat m = pushforward_matrix(f, cyclic_group(3), 3);
    for (uint32_t u = 0; u < 3; ++u) CHECK(m.at(0, u) == 1);
  }
  SUBCASE("squaring maps I^3 into I^2") {
    auto f = table_fn(z3, 3, {0, 1, 1});
    CHECK(check_pushforward_bound(f, 2, 1, 3));
  }
}

TEST_CASE("products of gentle functions") {
  GroupPtr z2 = cyclic_group(2);
  GroupPtr z3 = cyclic_group(3);
  CHECK(check_product_gentle({GroupFunction::constant(z2, 2, 1), GroupFunction::constant(z3, 3, 0)}, 0));
  CHECK(check_product_gentle({table_fn(z2, 2, {0, 1}), table_fn(z2, 2, {0, 1})}, 1));
  CHECK(check_product_gentle({table_fn(z3, 3, {0, 1, 1}), table_fn(z3, 3, {0, 1, 1})}, 2));
}

TEST_CASE("perfect stability") {
  SUBCASE("A5 is stable at p = 2") {
    auto res = check_perfect_stability(alternating_5(), 2);
    CHECK(res.stable);
    CHECK(res.basics_in_i2);
    CHECK(res.dim_i1 == 59);
  }
  SUBCASE("Z2 drops from 1 to 0") {
    auto res = check_perfect_stability(cyclic_group(2), 2);
    CHECK(!res.stable);
    CHECK(res.dim_i1 == 1);
    CHECK(res.dim_i2 == 0);
  }
}

TEST_CASE("coprime relation") {
  GroupPtr z2z3 = abelian_group({2, 3});
  uint32_t u1 = z2z3->element_from_residues({1, 0});
  uint32_t u2 = z2z3->element_from_residues({0, 1});
  CHECK(check_coprime_relation(z2z3, u1, u2, 2));
  CHECK(check_coprime_relation(z2z3, u1, z2z3->identity(), 2));  // u2 = 0 is trivial
  GroupPtr z6 = abelian_group({6});
  CHECK(check_coprime_relation(z6, z6->element_from_residues({3}), z6->element_from_residues({2}), 3));
  CHECK_THROWS_AS(check_coprime_relation(z6, z6->element_from_residues({2}), z6->element_from_residues({4}), 3),
                  input_error);
}

TEST_CASE("integer polynomial window test") {
  std::vector<Rational> cube = {Rational(0), Rational(0), Rational(0), Rational(1)};
  SUBCASE("cubic passes at r = 3 on a small window") {
    CHECK(check_integer_polynomial(cube, 3, -6, 6).holds);
  }
  SUBCASE("cubic fails at r = 2 with a witness") {
    auto res = check_integer_polynomial(cube, 2, -6, 6);
    CHECK(!res.holds);
    REQUIRE(res.witness.size() == 3);
    // re-evaluate the defect sum at the witness exactly
    Rational sum(0);
    for (uint32_t mask = 0; mask < 8; ++mask) {
      long long arg = 0;
      int bits = 0;
      for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) {
          arg += res.witness[i];
          ++bits;
        }
      Rational term = Rational(arg) * Rational(arg) * Rational(arg);
      sum = bits % 2 ? sum - term : sum + term;
    }
    CHECK(!sum.is_zero());
  }
  SUBCASE("constants pass at r = 0") {
    CHECK(check_integer_polynomial({Rational(7, 3)}, 0, -5, 5).holds);
  }
  SUBCASE("half-integer binomial passes at r = 2") {
    // q(q-1)/2 has degree 2
    std::vector<Rational> binom = {Rational(0), Rational(-1, 2), Rational(1, 2)};
    CHECK(check_integer_polynomial(binom, 2, -8, 8).holds);
    CHECK(!check_integer_polynomial(binom, 1, -8, 8).holds);
  }
}

TEST_CASE("projection congruence and kernel intersection") {
  SUBCASE("two Z2 factors, r = 1") {
    auto res = check_lemma_7_1({2, 2}, 2, 1, 20, 42);
    CHECK(res.identity_holds);
    CHECK(res.membership_holds);
  }
  SUBCASE("r at least the factor count is trivial") {
    auto res = check_lemma_7_1({2, 2}, 2, 2, 5, 1);
    CHECK(res.identity_holds);
    CHECK(res.membership_holds);
    CHECK(res.kernel_dim == 0);
  }
  SUBCASE("three Z2 factors, r = 1, exhaustive") {
    auto res = check_lemma_7_1({2, 2, 2}, 2, 1, 50, 3);
    CHECK(res.identity_holds);
    CHECK(res.membership_holds);
  }
  SUBCASE("mixed prime: Z3 factors at p = 2") {
    auto res = check_lemma_7_1({3, 3}, 2, 1, 50, 9);
    CHECK(res.identity_holds);
    CHECK(res.membership_holds);
  }
  SUBCASE("four Z2 factors: kernel dims count the higher product generators") {
    // the intersection over |J| <= r is spanned by the products over subsets
    // of size > r, so its dimension is the tail binomial sum
    for (uint32_t r : {1u, 2u, 3u}) {
      auto res = check_lemma_7_1({2, 2, 2, 2}, 2, r, 10, 5);
      CHECK(res.identity_holds);
      CHECK(res.membership_holds);
      std::size_t expect = 0;
      for (uint32_t k = r + 1; k <= 4; ++k) {
        std::size_t binom = 1;
        for (uint32_t i = 1; i <= k; ++i) binom = binom * (4 - k + i) / i;
        expect += binom;
      }
      CHECK(res.kernel_dim == expect);
    }
  }
  SUBCASE("factor count is capped") {
    CHECK_THROWS_AS(check_lemma_7_1({2, 2, 2, 2, 2}, 2, 1, 5, 1), cap_error);
  }
}
