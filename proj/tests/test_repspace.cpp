#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "quivercells/ext.hpp"

using namespace quivercells;

TEST_CASE("assemble_d examples", "[repspace]") {
  Rationals q;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto kn = quivers::kronecker(n);
    auto ep = assemble_d(simple(kn, q, 0), simple(kn, q, 1));
    CHECK(ep.d_matrix().cols() == 0);
    CHECK(ep.ext_dim() == n);
    CHECK(ep.hom_dim() == 0);
    for (std::size_t i = 1; i <= n; ++i) {
      auto t = fixtures::t_i(q, n, i);
      auto et = assemble_d(t, t);
      CHECK(et.hom_dim() == 1);
      CHECK(et.ext_dim() == n - 1);
    }
  }
  Quiver one({"v"});
  auto s = simple(one, q, 0);
  auto es = assemble_d(s, s);
  CHECK(es.hom_dim() == 1);
  CHECK(es.ext_dim() == 0);
  CHECK_THROWS(assemble_d(simple(quivers::kronecker(2), q, 0), simple(quivers::kronecker(3), q, 0)));
}

TEST_CASE("hom_basis examples", "[repspace]") {
  Rationals q;
  auto k2 = quivers::kronecker(2);
  CHECK(hom_basis(simple(k2, q, 0), simple(k2, q, 1)).empty());
  auto t1 = fixtures::k3ext_t1(q), t2 = fixtures::k3ext_t2(q);
  auto h = hom_basis(t2, t1);
  REQUIRE(h.size() == 1);
  auto f = h[0].components;
  mpq_class c = f[0](0, 0);  // normalise so that f(1') = 1
  REQUIRE(c != 0);
  CHECK(f[0].scaled(mpq_class(1 / c)) == Matrix<Rationals>::from_ints(q, {{1}}));
  CHECK(f[1].scaled(mpq_class(1 / c)) == Matrix<Rationals>::from_ints(q, {{0, 1}}));
  for (const auto& m : h) CHECK(is_morphism(t2, t1, m.components));
  auto e = hom_basis(fixtures::t_i(q, 3, 2), fixtures::t_i(q, 3, 2));
  REQUIRE(e.size() == 1);
  CHECK(e[0].components[0] == e[0].components[0]);
}

TEST_CASE("pi_reduce behaviour", "[repspace]") {
  Rationals q;
  auto k2 = quivers::kronecker(2);
  auto s0 = simple(k2, q, 0), s1 = simple(k2, q, 1);
  auto ep = assemble_d(s0, s1);
  auto f = standard_relement(k2, q, s0.dims(), s1.dims(), 1, 0, 0);
  CHECK(ep.pi_reduce(f) == f);

  std::mt19937_64 rng(5);
  PrimeField k5(5);
  for (int t = 0; t < 40; ++t) {
    auto quiv = fixtures::random_quiver(rng, 3, 4);
    auto dn = fixtures::random_dims(rng, quiv, 3), dm = fixtures::random_dims(rng, quiv, 3);
    auto n = fixtures::random_rep(rng, quiv, k5, dn), m = fixtures::random_rep(rng, quiv, k5, dm);
    ExtPresentation<PrimeField> e(n, m);
    auto g = fixtures::random_relement(rng, quiv, k5, dn, dm);
    auto h = fixtures::random_relement(rng, quiv, k5, dn, dm);
    // image of d reduces to zero
    Vec<PrimeField> x(e.d_matrix().cols());
    for (auto& v : x) v = k5.element(rng());
    auto img = e.relement(e.d_matrix() * x);
    CHECK(is_zero(e.pi_reduce(img)));
    // idempotent, linear, constant on cosets
    auto rg = e.pi_reduce(g);
    CHECK(e.pi_reduce(rg) == rg);
    CHECK(e.pi_reduce(g + h) == e.pi_reduce(rg + e.pi_reduce(h)));
    CHECK(e.pi_reduce(g + img) == rg);
    CHECK(e.pi_reduce(scaled(g, k5.element(3))) == scaled(rg, k5.element(3)));
  }
}

TEST_CASE("represent_basis examples", "[repspace]") {
  Rationals q;
  auto k3 = quivers::kronecker(3);
  auto sel = represent_basis(assemble_d(simple(k3, q, 0), simple(k3, q, 1)));
  REQUIRE(sel.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(sel[i] == standard_relement(k3, q, {1, 0}, {0, 1}, i, 0, 0));
  for (std::size_t i = 1; i <= 3; ++i) {
    auto t = fixtures::t_i(q, 3, i);
    auto r = represent_basis(assemble_d(t, t));
    REQUIRE(r.size() == 2);
    std::size_t k = 0;
    for (std::size_t j = 0; j < 3; ++j)
      if (j + 1 != i) CHECK(r[k++] == standard_relement(k3, q, {1, 1}, {1, 1}, j, 0, 0));
  }
  // S(4): M_beta1 = (q1 -a1-> q0), M_beta2 = lines q2, q3, q4 into a one-dimensional q0
  auto s4 = quivers::subspace(4);
  auto b1 = make_rep(s4, q, {1, 1, 0, 0, 0}, {{{1}}, {}, {}, {}});
  auto b2 = make_rep(s4, q, {1, 0, 1, 1, 1}, {{}, {{1}}, {{1}}, {{1}}});
  auto r = represent_basis(assemble_d(b2, b1));
  REQUIRE(r.size() == 2);
  CHECK(r[0] == standard_relement(s4, q, b2.dims(), b1.dims(), 1, 0, 0));
  CHECK(r[1] == standard_relement(s4, q, b2.dims(), b1.dims(), 2, 0, 0));
  // partial candidates are flagged
  auto ep = assemble_d(b2, b1);
  auto part = represent_basis(ep, {r[0]});
  CHECK_FALSE(part.complete);
}

TEST_CASE("middle_term and deform examples", "[repspace]") {
  Rationals q;
  auto k3 = quivers::kronecker(3);
  auto s0 = simple(k3, q, 0), s1 = simple(k3, q, 1);
  CHECK(middle_term(s1, s0, zero_relement(s0, s1)) == direct_sum(s1, s0));
  for (std::size_t i = 1; i <= 3; ++i)
    CHECK(middle_term(s1, s0, standard_relement(k3, q, s0.dims(), s1.dims(), i - 1, 0, 0)) == fixtures::t_i(q, 3, i));

  auto b = fixtures::k3ext_middle_term(q);
  CHECK(b.dims() == DimVector{2, 3});
  // basis (1', 1) and (2', 3', 2)
  CHECK(b.map(0) == Matrix<Rationals>::from_ints(q, {{0, 0}, {1, 0}, {0, 1}}));
  CHECK(b.map(1) == Matrix<Rationals>::from_ints(q, {{1, 0}, {0, 0}, {0, 0}}));
  CHECK(b.map(2) == Matrix<Rationals>::from_ints(q, {{0, 1}, {0, 0}, {0, 0}}));
  auto incl = block_inclusion(fixtures::k3ext_t2(q), b);
  auto proj = block_projection(b, fixtures::k3ext_t1(q));
  CHECK(is_morphism(incl.source, incl.target, incl.components));
  CHECK(is_morphism(proj.source, proj.target, proj.components));

  auto t2 = fixtures::t_i(q, 3, 2);
  CHECK(deform(t2, zero_relement(t2, t2)) == t2);
  auto lam = zero_relement(t2, t2);
  lam.blocks[0](0, 0) = q.from_int(5);
  lam.blocks[2](0, 0) = mpq_class(1, 3);
  auto d = deform(t2, lam);
  CHECK(d.map(0)(0, 0) == 5);
  CHECK(d.map(1)(0, 0) == 1);
  CHECK(d.map(2)(0, 0) == mpq_class(1, 3));

  auto tf = deform(fixtures::k22_t(q), fixtures::k22_f(q));
  CHECK(tf.map(0) == Matrix<Rationals>::identity(q, 2));
  CHECK(tf.map(1) == Matrix<Rationals>::from_ints(q, {{1, 1}, {0, 1}}));
}

TEST_CASE("direct_sum and restrict", "[repspace]") {
  Rationals q;
  auto k3 = quivers::kronecker(3);
  auto s = direct_sum(simple(k3, q, 0), simple(k3, q, 1));
  CHECK(s.dims() == DimVector{1, 1});
  for (const auto& m : s.maps()) CHECK(m.is_zero());
  auto t = fixtures::t_i(q, 3, 1);
  CHECK(direct_sum(t, Representation<Rationals>(k3, q, {0, 0})) == t);
  CHECK(restrict(t, {0, 1}) == t);
  CHECK(restrict(t, {}).total_dim() == 0);

  // the S(4) middle term restricted to the S(3) support keeps dims (2,1,1,1)
  auto s4 = quivers::subspace(4);
  auto b = make_rep(s4, q, {2, 1, 1, 1, 1}, {{{1}, {0}}, {{1}, {1}}, {{0}, {1}}, {{0}, {1}}});
  auto r = restrict(b, {0, 1, 2, 3});
  CHECK(r.dims() == DimVector{2, 1, 1, 1});
  CHECK(r.quiver().num_arrows() == 3);
}

TEMPLATE_TEST_CASE("Euler identity hom - ext = <a,b>", "[repspace]", Rationals, PrimeField) {
  std::mt19937_64 rng(2024);
  TestType k;
  if constexpr (std::is_same_v<TestType, PrimeField>) k = PrimeField(5);
  for (int t = 0; t < 50; ++t) {
    auto quiv = fixtures::random_quiver(rng, 3, 4);
    auto dn = fixtures::random_dims(rng, quiv, 4), dm = fixtures::random_dims(rng, quiv, 4);
    auto n = fixtures::random_rep(rng, quiv, k, dn), m = fixtures::random_rep(rng, quiv, k, dm);
    auto ep = assemble_d(n, m);
    CHECK(static_cast<long long>(ep.hom_dim()) - static_cast<long long>(ep.ext_dim()) == euler_form(quiv, dn, dm));
    CHECK(ep.ext_dim() == ep.r_dim() - rank(ep.d_matrix()));
    auto f = fixtures::random_relement(rng, quiv, k, dn, dm);
    auto b = middle_term(m, n, f);
    CHECK(is_morphism(m, b, block_inclusion(m, b).components));
    CHECK(is_morphism(b, n, block_projection(b, n).components));
    CHECK(represent_basis(ep).size() == ep.ext_dim());
  }
}
