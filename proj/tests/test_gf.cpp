#include <doctest.h>

#include <random>
#include <set>

#include "gentle/gf.hpp"

using namespace gentle;
using namespace gentle::gf;

namespace {

SparseVector vec(BasisPtr b, uint32_t p, std::vector<uint32_t> dense) {
  return SparseVector::from_dense(std::move(b), p, dense);
}

// brute-force span size by enumerating all coefficient combinations
std::size_t brute_span_size(const std::vector<SparseVector>& rows, uint32_t p) {
  std::set<std::vector<uint32_t>> seen;
  std::size_t n = rows.size();
  std::vector<uint32_t> coef(n, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= p;
  PrimeField F(p);
  for (std::size_t it = 0; it < total; ++it) {
    std::vector<uint32_t> acc(rows.front().basis->size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!coef[i]) continue;
      auto d = rows[i].dense();
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = F.add(acc[j], F.mul(coef[i], d[j]));
    }
    seen.insert(acc);
    for (std::size_t i = n; i-- > 0;) {
      if (++coef[i] < p) break;
      coef[i] = 0;
    }
  }
  return seen.size();
}

}  // namespace

TEST_CASE("prime field basics") {
  CHECK(is_prime(2));
  CHECK(is_prime(65521));
  CHECK(!is_prime(1));
  CHECK(!is_prime(91));
  CHECK_THROWS_AS(PrimeField(4), input_error);
  CHECK_THROWS_AS(PrimeField(1 << 16), input_error);
  PrimeField F(7);
  for (uint32_t a = 1; a < 7; ++a) CHECK(F.mul(a, F.inv(a)) == 1);
  CHECK(F.reduce_int(-3) == 4);
}

TEST_CASE("rref examples") {
  auto b3 = anon_basis(3);
  SUBCASE("empty row list gives the zero subspace") {
    Subspace s = rref(b3, 2, {});
    CHECK(s.rank() == 0);
  }
  SUBCASE("identity rows have full rank") {
    std::vector<SparseVector> rows;
    for (int i = 0; i < 3; ++i) rows.push_back(SparseVector::unit(b3, 2, i));
    CHECK(rref(rows).rank() == 3);
  }
  SUBCASE("dependent rows over F_2") {
    std::vector<SparseVector> rows = {vec(b3, 2, {1, 1, 0}), vec(b3, 2, {0, 1, 1}), vec(b3, 2, {1, 0, 1})};
    Subspace s = rref(rows);
    CHECK(s.rank() == 2);
    // oracle: the span has 2^2 = 4 vectors
    CHECK(brute_span_size(rows, 2) == 4);
  }
  SUBCASE("ambient mismatch is a structural error") {
    auto b4 = anon_basis(4);
    std::vector<SparseVector> rows = {SparseVector::unit(b3, 2, 0), SparseVector::unit(b4, 2, 0)};
    CHECK_THROWS_AS(rref(rows), input_error);
  }
}

TEST_CASE("kernel examples") {
  SUBCASE("zero matrix has full kernel") {
    Mat m(2, 3, 4);
    Subspace k = kernel_of_matrix(m, anon_basis(4));
    CHECK(k.rank() == 4);
  }
  SUBCASE("identity has zero kernel") {
    Subspace k = kernel_of_matrix(Mat::identity(3, 5), anon_basis(5));
    CHECK(k.rank() == 0);
  }
  SUBCASE("[1 1] over F_2") {
    Mat m(2, 1, 2);
    m.at(0, 0) = 1;
    m.at(0, 1) = 1;
    Subspace k = kernel_of_matrix(m, anon_basis(2));
    REQUIRE(k.rank() == 1);
    // oracle: check both candidate nonzero vectors
    CHECK(k.contains_dense({1, 1}));
    CHECK(!k.contains_dense({1, 0}));
  }
}

TEST_CASE("kernel correctness oracle: exhaustive for small dimensions") {
  std::mt19937_64 rng(20240817);
  for (uint32_t p : {2u, 3u}) {
    PrimeField F(p);
    for (int trial = 0; trial < 20; ++trial) {
      std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 6;
      Mat m(p, rows, cols);
      for (auto& v : m.a) v = static_cast<uint32_t>(rng() % p);
      Subspace ker = kernel_of_matrix(m, anon_basis(cols));
      // rank-nullity
      CHECK(ker.rank() + mat_rank(m) == cols);
      // enumerate every vector of F_p^cols
      std::size_t total = 1;
      for (std::size_t i = 0; i < cols; ++i) total *= p;
      std::vector<uint32_t> v(cols, 0);
      for (std::size_t it = 0; it < total; ++it) {
        bool in_kernel = true;
        for (std::size_t r = 0; r < rows && in_kernel; ++r) {
          uint32_t acc = 0;
          for (std::size_t c = 0; c < cols; ++c) acc = F.add(acc, F.mul(m.at(r, c), v[c]));
          if (acc) in_kernel = false;
        }
        CHECK(ker.contains_dense(v) == in_kernel);
        for (std::size_t i = cols; i-- > 0;) {
          if (++v[i] < p) break;
          v[i] = 0;
        }
      }
    }
  }
}

TEST_CASE("subspace comparison") {
  auto b2 = anon_basis(2);
  Subspace zero = Subspace::zero(b2, 2);
  Subspace a = rref({vec(b2, 2, {1, 0})});
  Subspace b = rref({vec(b2, 2, {0, 1})});
  SUBCASE("zero below everything; reflexivity") {
    CHECK(subspace_leq(zero, a).holds);
    CHECK(subspace_leq(a, a).holds);
  }
  SUBCASE("incomparable lines with witness") {
    auto res = subspace_leq(a, b);
    CHECK(!res.holds);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->dense() == std::vector<uint32_t>{1, 0});
  }
  SUBCASE("ambient mismatch") {
    Subspace other = Subspace::zero(anon_basis(3), 2);
    CHECK_THROWS_AS(subspace_leq(a, other), input_error);
  }
}

TEST_CASE("rref idempotence and partial order on random triples") {
  std::mt19937_64 rng(7);
  auto b = anon_basis(5);
  auto random_subspace = [&](uint32_t p) {
    std::vector<SparseVector> rows;
    std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<uint32_t> d(5);
      for (auto& x : d) x = static_cast<uint32_t>(rng() % p);
      rows.push_back(vec(b, p, d));
    }
    return rref(b, p, rows);
  };
  for (uint32_t p : {2u, 3u}) {
    for (int trial = 0; trial < 30; ++trial) {
      Subspace A = random_subspace(p), B = random_subspace(p), C = random_subspace(p);
      // idempotence
      std::vector<SparseVector> rows;
      for (std::size_t i = 0; i < A.rank(); ++i) rows.push_back(A.row(i));
      CHECK(rref(b, p, rows).equals(A));
      // antisymmetry on canonical forms
      if (subspace_leq(A, B).holds && subspace_leq(B, A).holds) CHECK(A.equals(B));
      // transitivity
      Subspace AB = subspace_sum(A, B);
      CHECK(subspace_leq(A, AB).holds);
      if (subspace_leq(A, B).holds && subspace_leq(B, C).holds) CHECK(subspace_leq(A, C).holds);
    }
  }
}

TEST_CASE("solver") {
  Mat m(5, 2, 3);
  m.at(0, 0) = 1;
  m.at(0, 2) = 2;
  m.at(1, 1) = 3;
  auto x = mat_solve(m, {4, 1});
  REQUIRE(x.has_value());
  PrimeField F(5);
  CHECK(F.add(F.mul(m.at(0, 0), (*x)[0]), F.mul(m.at(0, 2), (*x)[2])) == 4);
  // inconsistent system
  Mat z(5, 1, 1);
  CHECK(!mat_solve(z, {3}).has_value());
}
