// Small representations that recur across the test files.
#pragma once

#include <random>

#include "quivercells/cover.hpp"
#include "quivercells/representation.hpp"

namespace fixtures {

using namespace quivercells;

// T_i over K(n): dimension (1,1), arrow a_i carries 1.
template <class F>
Representation<F> t_i(const F& k, std::size_t n, std::size_t i) {
  auto q = quivers::kronecker(n);
  Representation<F> r(q, k, {1, 1});
  r.map(i - 1)(0, 0) = k.one();
  return r;
}

// K(3) with arrows a, b, c from 0 to 1.
inline Quiver k3abc() {
  Quiver q({"0", "1"});
  q.add_arrow("a", 0, 1);
  q.add_arrow("b", 0, 1);
  q.add_arrow("c", 0, 1);
  return q;
}

// T_1 = (1 -a-> 2).
template <class F>
Representation<F> k3ext_t1(const F& k) {
  return make_rep(k3abc(), k, {1, 1}, {{{1}}, {{0}}, {{0}}});
}

// T_2 = (1' -b-> 2', 1' -a-> 3').
template <class F>
Representation<F> k3ext_t2(const F& k) {
  return make_rep(k3abc(), k, {1, 2}, {{{0}, {1}}, {{1}, {0}}, {{0}, {0}}});
}

// e = 1 -c-> 2' in R(T_1, T_2).
template <class F>
RElement<F> k3ext_e(const F& k) {
  return standard_relement(k3abc(), k, DimVector{1, 1}, DimVector{1, 2}, 2, 0, 0);
}

// Middle term with M = T_2 first: basis (1', 1) at vertex 0 and (2', 3', 2) at vertex 1.
template <class F>
Representation<F> k3ext_middle_term(const F& k) {
  return middle_term(k3ext_t2(k), k3ext_t1(k), k3ext_e(k));
}

// The lift of the (2,3) example of K(3) with gamma = (1,3,5). Basis order A, B at
// vertex 0 (weights -1, 1) and X, Y, Z at vertex 1 (weights 0, 4, 6).
template <class F>
CoverRepresentation<F> att23_cover(const F& k) {
  auto q = k3abc();
  CoverVertex a{0, {-1, 0, 0}}, b{0, {-1, -1, 1}}, x{1, {0, 0, 0}}, y{1, {-1, 0, 1}}, z{1, {-1, -1, 2}};
  auto w = induced_window(q, {a, b, x, y, z}, 2);
  Representation<F> r(w.quiver, k, DimVector(w.vertices.size(), 1));
  for (auto& m : r.maps()) m(0, 0) = k.one();
  return {w, r, {1, 3, 5}, {*w.find(a), *w.find(b), *w.find(x), *w.find(y), *w.find(z)}};
}

// K(2), (2,2): T = (I, J) and S = (J, I) with J the nilpotent Jordan block.
template <class F>
Representation<F> k22_t(const F& k) {
  return make_rep(quivers::kronecker(2), k, {2, 2}, {{{1, 0}, {0, 1}}, {{0, 1}, {0, 0}}});
}
template <class F>
Representation<F> k22_s(const F& k) {
  return make_rep(quivers::kronecker(2), k, {2, 2}, {{{0, 1}, {0, 0}}, {{1, 0}, {0, 1}}});
}
// f = (0, I) in R(T,T).
template <class F>
RElement<F> k22_f(const F& k) {
  auto q = quivers::kronecker(2);
  auto f = zero_relement(q, k, DimVector{2, 2}, DimVector{2, 2});
  f.blocks[1] = Matrix<F>::identity(k, 2);
  return f;
}

// The unique indecomposable of S(3) with lines (1,0), (0,1), (1,1).
template <class F>
Representation<F> s3_t(const F& k) {
  return make_rep(quivers::subspace(3), k, {2, 1, 1, 1}, {{{1}, {0}}, {{0}, {1}}, {{1}, {1}}});
}

// Random quiver with at most max_vertices vertices and max_arrows arrows (loops allowed).
inline Quiver random_quiver(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_arrows) {
  std::size_t nv = 1 + rng() % max_vertices, na = rng() % (max_arrows + 1);
  Quiver q;
  for (std::size_t v = 0; v < nv; ++v) q.add_vertex(std::to_string(v));
  for (std::size_t a = 0; a < na; ++a) q.add_arrow("x" + std::to_string(a), rng() % nv, rng() % nv);
  return q;
}

inline DimVector random_dims(std::mt19937_64& rng, const Quiver& q, long long max_dim) {
  DimVector d(q.num_vertices());
  for (auto& x : d) x = static_cast<long long>(rng() % static_cast<std::uint64_t>(max_dim + 1));
  return d;
}

template <class F>
Representation<F> random_rep(std::mt19937_64& rng, const Quiver& q, const F& k, const DimVector& d, int spread = 2) {
  Representation<F> r(q, k, d);
  std::uniform_int_distribution<int> dist(-spread, spread);
  for (auto& m : r.maps())
    for (auto& x : m.data()) x = k.from_int(dist(rng));
  return r;
}

template <class F>
RElement<F> random_relement(std::mt19937_64& rng, const Quiver& q, const F& k, const DimVector& s, const DimVector& t,
                            int spread = 2) {
  auto f = zero_relement(q, k, s, t);
  std::uniform_int_distribution<int> dist(-spread, spread);
  for (auto& m : f.blocks)
    for (auto& x : m.data()) x = k.from_int(dist(rng));
  return f;
}

}  // namespace fixtures
