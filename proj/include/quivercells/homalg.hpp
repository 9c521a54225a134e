#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "enumerate.hpp"
#include "ext.hpp"

namespace quivercells {

// Coordinates of a morphism with respect to the kernel basis of ep.
template <class F>
Vec<F> hom_coordinates(const ExtPresentation<F>& ep, const std::vector<Matrix<F>>& phi) {
  const F& k = ep.source().field();
  Matrix<F> basis = Matrix<F>::from_columns(k, ep.kernel(), ep.d_matrix().cols());
  auto x = solve(basis, ep.flatten_hom(phi));
  if (!x) throw std::invalid_argument("components do not define a morphism");
  return *x;
}

// Matrix of Hom(b, b2) -> Hom(M(lambda), N(mu')), phi -> proj o phi o incl, on hom_basis coordinates.
template <class F>
Matrix<F> theta_map(const Representation<F>& b, const Representation<F>& b2, const Morphism<F>& incl, const Morphism<F>& proj) {
  if (!(incl.target.dims() == b.dims()) || !(proj.source.dims() == b2.dims()))
    throw std::invalid_argument("theta_map: inclusion and projection do not compose with b and b2");
  ExtPresentation<F> dom(b, b2), cod(incl.source, proj.target);
  const F& k = b.field();
  Matrix<F> out(k, cod.hom_dim(), dom.hom_dim());
  for (std::size_t j = 0; j < dom.kernel().size(); ++j) {
    auto phi = dom.unflatten_hom(dom.kernel()[j]);
    std::vector<Matrix<F>> psi;
    for (std::size_t v = 0; v < phi.size(); ++v) psi.push_back(proj.components[v] * phi[v] * incl.components[v]);
    if (cod.hom_dim() == 0) continue;
    auto x = hom_coordinates(cod, psi);
    for (std::size_t i = 0; i < x.size(); ++i) out(i, j) = x[i];
  }
  return out;
}

// delta_L : Hom(L,N) -> Ext(L,M), g -> pi_{L,M}((f_a g_s(a))_a), for f in R(N,M).
// Columns follow hom_basis(L,N); rows follow the Ext coordinates of ep_lm.
template <class F>
Matrix<F> connecting_hom(const Representation<F>& l, const Representation<F>& n, const RElement<F>& f,
                         const ExtPresentation<F>& ep_lm) {
  const Quiver& q = l.quiver();
  check_relement(q, f);
  if (f.source_dims != n.dims() || ep_lm.source().dims() != l.dims() || ep_lm.target().dims() != f.target_dims)
    throw std::invalid_argument("connecting_hom: mismatched contexts");
  ExtPresentation<F> ep_ln(l, n);
  Matrix<F> out(l.field(), ep_lm.ext_dim(), ep_ln.hom_dim());
  for (std::size_t j = 0; j < ep_ln.kernel().size(); ++j) {
    auto g = ep_ln.unflatten_hom(ep_ln.kernel()[j]);
    RElement<F> h = zero_relement(q, l.field(), l.dims(), f.target_dims);
    for (std::size_t a = 0; a < q.num_arrows(); ++a) h.blocks[a] = f.blocks[a] * g[q.arrow(a).src];
    auto c = ep_lm.ext_coordinates_of(h);
    for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
  }
  return out;
}

// Dual variant delta^L : Hom(M,L) -> Ext(N,L), h -> pi_{N,L}((h_t(a) f_a)_a).
template <class F>
Matrix<F> connecting_hom_dual(const Representation<F>& l, const Representation<F>& m, const RElement<F>& f,
                              const ExtPresentation<F>& ep_nl) {
  const Quiver& q = l.quiver();
  check_relement(q, f);
  if (f.target_dims != m.dims() || ep_nl.target().dims() != l.dims() || ep_nl.source().dims() != f.source_dims)
    throw std::invalid_argument("connecting_hom_dual: mismatched contexts");
  ExtPresentation<F> ep_ml(m, l);
  Matrix<F> out(l.field(), ep_nl.ext_dim(), ep_ml.hom_dim());
  for (std::size_t j = 0; j < ep_ml.kernel().size(); ++j) {
    auto h = ep_ml.unflatten_hom(ep_ml.kernel()[j]);
    RElement<F> r = zero_relement(q, l.field(), f.source_dims, l.dims());
    for (std::size_t a = 0; a < q.num_arrows(); ++a) r.blocks[a] = h[q.arrow(a).tgt] * f.blocks[a];
    auto c = ep_nl.ext_coordinates_of(r);
    for (std::size_t i = 0; i < c.size(); ++i) out(i, j) = c[i];
  }
  return out;
}

// Places an element of R(X,Y), X,Y in {M,N}, into R(B,B) for B_q = M_q + N_q.
enum class Block { MM, NN, NM, MN };

template <class F>
RElement<F> embed_in_extension(const Quiver& q, const F& k, const DimVector& m, const DimVector& n, const RElement<F>& x,
                               Block which) {
  DimVector b(m);
  for (std::size_t v = 0; v < b.size(); ++v) b[v] += n[v];
  RElement<F> r = zero_relement(q, k, b, b);
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    std::size_t row0 = (which == Block::MM || which == Block::NM) ? 0 : static_cast<std::size_t>(m[ar.tgt]);
    std::size_t col0 = (which == Block::MM || which == Block::MN) ? 0 : static_cast<std::size_t>(m[ar.src]);
    r.blocks[a].set_block(row0, col0, x.blocks[a]);
  }
  return r;
}

template <class F>
struct ExtensionBasisInput {
  std::vector<RElement<F>> r_m;   // represents a basis of Ext(M,M)
  std::vector<RElement<F>> r_n;   // Ext(N,N)
  std::vector<RElement<F>> r_nm;  // Ext(N,M)
  std::vector<RElement<F>> r_mn;  // Ext(M,N)
};

template <class F>
ExtensionBasisInput<F> default_extension_bases(const Representation<F>& m, const Representation<F>& n) {
  return {represent_basis(ExtPresentation<F>(m, m)), represent_basis(ExtPresentation<F>(n, n)),
          represent_basis(ExtPresentation<F>(n, m)), represent_basis(ExtPresentation<F>(m, n))};
}

template <class F>
void require_basis(const ExtPresentation<F>& ep, const std::vector<RElement<F>>& xs, const char* name) {
  auto sel = represent_basis(ep, xs);
  if (!sel.complete || sel.indices.size() != xs.size())
    throw std::invalid_argument(std::string("supplied set ") + name + " does not represent a basis");
}

// A subset of R'_M, R'_N, R'_{N,M}, R_{M,N} embedded in R(B,B), B the middle term of e,
// whose classes form a basis of Ext(B,B). Elements of R_{M,N} are taken first, then
// R_N, R_{N,M}, R_M, each greedily modulo what was already chosen.
template <class F>
std::vector<RElement<F>> ext_basis_of_extension(const Representation<F>& m, const Representation<F>& n, const RElement<F>& e,
                                                const ExtensionBasisInput<F>& bases) {
  const Quiver& q = m.quiver();
  const F& k = m.field();
  require_basis(ExtPresentation<F>(m, m), bases.r_m, "R_M");
  require_basis(ExtPresentation<F>(n, n), bases.r_n, "R_N");
  require_basis(ExtPresentation<F>(n, m), bases.r_nm, "R_{N,M}");
  require_basis(ExtPresentation<F>(m, n), bases.r_mn, "R_{M,N}");
  Representation<F> b = middle_term(m, n, e);
  ExtPresentation<F> ep(b, b);
  std::vector<RElement<F>> cand;
  for (const auto& x : bases.r_mn) cand.push_back(embed_in_extension(q, k, m.dims(), n.dims(), x, Block::MN));
  for (const auto& x : bases.r_n) cand.push_back(embed_in_extension(q, k, m.dims(), n.dims(), x, Block::NN));
  for (const auto& x : bases.r_nm) cand.push_back(embed_in_extension(q, k, m.dims(), n.dims(), x, Block::NM));
  for (const auto& x : bases.r_m) cand.push_back(embed_in_extension(q, k, m.dims(), n.dims(), x, Block::MM));
  auto sel = represent_basis(ep, cand);
  if (!sel.complete) throw std::logic_error("ext_basis_of_extension: candidates do not span Ext(B,B)");
  std::vector<RElement<F>> out;
  for (auto i : sel.indices) out.push_back(cand[i]);
  return out;
}

template <class F>
std::vector<RElement<F>> ext_basis_of_extension(const Representation<F>& m, const Representation<F>& n, const RElement<F>& e) {
  return ext_basis_of_extension(m, n, e, default_extension_bases(m, n));
}

template <class F>
bool components_invertible(const std::vector<Matrix<F>>& phi) {
  for (const auto& x : phi)
    if (!invertible(x)) return false;
  return true;
}

// Isomorphism test. Over F_p: exhaustive scan of Hom(a,b). Over Q: random
// certificate for "yes", and for "no" an exhaustive grid {0..D}^h with D the total
// dimension (the degree of the product of determinants).
template <class F>
bool is_isomorphic(const Representation<F>& a, const Representation<F>& b, const Budget& budget = {}) {
  check_compatible(a, b);
  if (a.dims() != b.dims()) return false;
  ExtPresentation<F> ab(a, b), ba(b, a);
  if (ab.hom_dim() != ba.hom_dim()) return false;
  if (a.total_dim() == 0) return true;
  if (ab.hom_dim() == 0) return false;
  const F& k = a.field();
  std::size_t h = ab.hom_dim(), len = ab.d_matrix().cols();
  if constexpr (std::is_same_v<F, PrimeField>) {
    require_budget(k.order(), h, budget, "is_isomorphic");
    bool found = false;
    for_each_combination(k, ab.kernel(), len, [&](const auto&, const Vec<F>& v) {
      if (components_invertible(ab.unflatten_hom(v))) found = true;
      return !found;
    });
    return found;
  } else {
    auto combine = [&](const std::vector<long long>& c) {
      Vec<F> v(len, k.zero());
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < len; ++j) v[j] = k.add(v[j], k.mul(k.from_int(c[i]), ab.kernel()[i][j]));
      return components_invertible(ab.unflatten_hom(v));
    };
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long long> dist(-1000, 1000);
    std::vector<long long> c(h);
    for (int t = 0; t < 16; ++t) {
      for (auto& x : c) x = dist(rng);
      if (combine(c)) return true;
    }
    std::uint64_t side = static_cast<std::uint64_t>(a.total_dim()) + 1;
    require_budget(side, h, budget, "is_isomorphic (grid)");
    std::fill(c.begin(), c.end(), 0);
    while (true) {
      if (combine(c)) return true;
      std::size_t i = 0;
      for (; i < h; ++i) {
        if (static_cast<std::uint64_t>(++c[i]) < side) break;
        c[i] = 0;
      }
      if (i == h) return false;
    }
  }
}

struct EndoAnalysis {
  std::size_t end_dim = 0;
  std::size_t nilpotent_span_dim = 0;
  bool is_local = false;
  bool is_absolutely_indec = false;
  mpz_class unit_count = 0;
  bool complete = true;  // false when enumeration stopped at the first non-local witness
};

template <class F>
bool is_nilpotent(const Matrix<F>& x) {
  std::size_t d = x.rows();
  if (d == 0) return true;
  Matrix<F> p = x;
  for (std::size_t i = 1; i < d; ++i) p = p * x;
  return p.is_zero();
}

// Endomorphism ring analysis. Over F_p by enumeration of End(M); over Q only the
// Schurian case (end_dim = 1) is decided.
template <class F>
EndoAnalysis analyze_end(const Representation<F>& m, const Budget& budget = {}, bool stop_early = false) {
  ExtPresentation<F> ep(m, m);
  EndoAnalysis r;
  r.end_dim = ep.hom_dim();
  if (m.total_dim() == 0) {  // the zero representation is not indecomposable
    r.unit_count = 1;
    return r;
  }
  if (r.end_dim == 1) {
    r.is_local = r.is_absolutely_indec = true;
    if constexpr (std::is_same_v<F, PrimeField>) r.unit_count = m.field().order() - 1;
    return r;
  }
  if constexpr (!std::is_same_v<F, PrimeField>) {
    throw Undecided("indecomposability of a non-Schurian representation over Q is not decided");
  } else {
    const PrimeField& k = m.field();
    require_budget(k.order(), r.end_dim, budget, "analyze_end");
    std::size_t len = ep.d_matrix().cols();
    RowSpace<F> nil(k, len);
    std::uint64_t units = 0, nils = 0;
    bool local = true;
    for_each_combination(k, ep.kernel(), len, [&](const auto&, const Vec<F>& v) {
      auto phi = ep.unflatten_hom(v);
      bool unit = components_invertible(phi);
      bool nilp = false;
      if (unit) {
        ++units;
      } else {
        nilp = std::all_of(phi.begin(), phi.end(), [](const auto& x) { return is_nilpotent(x); });
        if (nilp) {
          ++nils;
          nil.insert(v);
        } else {
          local = false;
          if (stop_early) return false;
        }
      }
      return true;
    });
    r.complete = local || !stop_early;
    r.unit_count = static_cast<unsigned long>(units);
    r.nilpotent_span_dim = nil.dim();
    // In a finite-dimensional algebra, covering by units and nilpotents forces
    // the nilpotents to be the radical; the span check guards the bookkeeping.
    r.is_local = local && checked_power(k.order(), nil.dim()) == nils;
    r.is_absolutely_indec = r.is_local && nil.dim() + 1 == r.end_dim;
    return r;
  }
}

template <class F>
bool is_indecomposable(const Representation<F>& m, const Budget& budget = {}) {
  return analyze_end(m, budget, true).is_local;
}

template <class F>
bool is_schurian(const Representation<F>& m) {
  return ExtPresentation<F>(m, m).hom_dim() == 1;
}

template <class F>
mpz_class aut_count(const Representation<F>& m, const Budget& budget = {}) {
  return analyze_end(m, budget, false).unit_count;
}

}  // namespace quivercells
