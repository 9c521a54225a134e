#include <catch_amalgamated.hpp>

#include <random>

#include "quivercells/matrix.hpp"

using namespace quivercells;

namespace {

template <class F>
Matrix<F> random_matrix(const F& k, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  Matrix<F> m(k, r, c);
  for (auto& x : m.data()) x = k.from_int(d(rng));
  return m;
}

}  // namespace

TEST_CASE("field elements parse and print canonically", "[exactfield]") {
  Rationals q;
  CHECK(q.to_string(q.parse("6/8")) == "3/4");
  CHECK(q.to_string(q.parse("-4/2")) == "-2");
  CHECK(q.to_string(q.parse("7")) == "7");
  CHECK_THROWS_AS(q.parse("3/0"), ParseError);
  CHECK_THROWS_AS(q.parse("x"), ParseError);
  CHECK_THROWS_AS(q.parse("1/-2"), ParseError);
  PrimeField f5(5);
  CHECK(f5.parse("7") == 2u);
  CHECK(f5.parse("-1") == 4u);
  CHECK(f5.parse("1/2") == 3u);
  CHECK_THROWS_AS(f5.parse("1/5"), ParseError);
  CHECK(f5.mul(f5.inv(3), 3) == 1u);
  CHECK(FieldSpec::parse("Fp:7") == FieldSpec::prime(7));
  CHECK(FieldSpec::parse("Q") == FieldSpec::rationals());
  CHECK_THROWS_AS(FieldSpec::parse("Fp:4"), ParseError);
}

TEST_CASE("rref examples", "[exactfield]") {
  Rationals q;
  auto id = Matrix<Rationals>::identity(q, 2);
  auto e = rref(id);
  CHECK(e.reduced == id);
  CHECK(e.pivots == std::vector<std::size_t>{0, 1});
  auto m = Matrix<Rationals>::from_ints(q, {{1, 2}, {2, 4}});
  e = rref(m);
  CHECK(e.rank() == 1);
  CHECK(e.reduced == Matrix<Rationals>::from_ints(q, {{1, 2}, {0, 0}}));
  PrimeField f2(2);
  auto e2 = rref(Matrix<PrimeField>::from_ints(f2, {{1, 1}, {1, 1}}));
  CHECK(e2.rank() == 1);
  CHECK(e2.reduced == Matrix<PrimeField>::from_ints(f2, {{1, 1}, {0, 0}}));
}

TEST_CASE("kernel, solve, invertible examples", "[exactfield]") {
  Rationals q;
  CHECK(kernel_basis(Matrix<Rationals>::identity(q, 3)).empty());
  CHECK(kernel_basis(Matrix<Rationals>(q, 2, 3)).size() == 3);
  PrimeField f2(2);
  auto k = kernel_basis(Matrix<PrimeField>::from_ints(f2, {{1, 1}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == Vec<PrimeField>{1, 1});

  auto x = solve(Matrix<Rationals>::identity(q, 2), Vec<Rationals>{3, 4});
  REQUIRE(x);
  CHECK(*x == Vec<Rationals>{3, 4});
  CHECK_FALSE(solve(Matrix<Rationals>(q, 2, 2), Vec<Rationals>{1, 0}));
  PrimeField f3(3);
  auto m = Matrix<PrimeField>::from_ints(f3, {{1, 1}});
  auto y = solve(m, Vec<PrimeField>{2});
  REQUIRE(y);
  CHECK(m * *y == Vec<PrimeField>{2});

  CHECK(invertible(Matrix<Rationals>::identity(q, 3)));
  CHECK_FALSE(invertible(Matrix<Rationals>(q, 2, 3)));
  CHECK_FALSE(invertible(Matrix<Rationals>::from_ints(q, {{1, 2}, {2, 4}})));
}

TEST_CASE("select_independent_mod examples", "[exactfield]") {
  Rationals q;
  Vec<Rationals> e1{1, 0}, e2{0, 1};
  CHECK(select_independent_mod(q, {e1, e2}, {}) == std::vector<std::size_t>{0, 1});
  CHECK(select_independent_mod(q, {e1, e1}, {}) == std::vector<std::size_t>{0});
  CHECK(select_independent_mod(q, {e1, e2}, {e1}) == std::vector<std::size_t>{1});
}

TEMPLATE_TEST_CASE("echelon invariants on random matrices", "[exactfield]", Rationals, PrimeField) {
  std::mt19937_64 rng(11);
  TestType k;
  if constexpr (std::is_same_v<TestType, PrimeField>) k = PrimeField(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = rng() % 6, c = rng() % 6;
    auto m = random_matrix(k, r, c, rng);
    auto e = rref(m);
    CHECK(rref(e.reduced).reduced == e.reduced);
    auto ker = kernel_basis(m);
    CHECK(ker.size() + e.rank() == c);
    for (const auto& v : ker) CHECK(RowSpace<TestType>(k, r).is_zero_vec(m * v));
    Vec<TestType> rhs(r, k.zero());
    for (auto& x : rhs) x = k.from_int(static_cast<long long>(rng() % 5));
    if (auto x = solve(m, rhs)) CHECK(m * *x == rhs);
    if (r == c && invertible(m)) CHECK(m * inverse(m) == Matrix<TestType>::identity(k, r));
  }
}
