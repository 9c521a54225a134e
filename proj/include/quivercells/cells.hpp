#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "ext.hpp"
#include "homalg.hpp"
#include "points.hpp"

namespace quivercells {

// unknown < verified < certified; certified means a construction whose hypotheses
// were checked symbolically or on every point of a finite parameter space.
enum class Flag { unknown, verified, certified };

inline std::string to_string(Flag f) {
  switch (f) {
    case Flag::verified: return "verified";
    case Flag::certified: return "certified";
    default: return "unknown";
  }
}

inline Flag weakest(Flag a, Flag b) { return std::min(a, b); }

class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
std::string describe(const Quiver& q, const F& k, const RElement<F>& f) {
  std::string s;
  for (std::size_t a = 0; a < f.blocks.size(); ++a)
    for (std::size_t i = 0; i < f.blocks[a].rows(); ++i)
      for (std::size_t j = 0; j < f.blocks[a].cols(); ++j) {
        if (k.is_zero(f.blocks[a](i, j))) continue;
        if (!s.empty()) s += " ";
        s += q.arrow(a).id + "[" + std::to_string(i) + "," + std::to_string(j) + "]=" + k.to_string(f.blocks[a](i, j));
      }
  return s.empty() ? "0" : s;
}

template <class F>
RElement<F> combine(const Quiver& q, const F& k, const DimVector& src, const DimVector& tgt, const std::vector<RElement<F>>& basis,
                    const std::vector<typename F::value_type>& c) {
  if (c.size() != basis.size()) throw std::invalid_argument("coefficient count differs from basis size");
  RElement<F> r = zero_relement(q, k, src, tgt);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!k.is_zero(c[i])) r = r + scaled(basis[i], c[i]);
  return r;
}

template <class F>
struct Cell {
  Representation<F> base;
  std::vector<RElement<F>> params;  // basis of U in R(T,T)
  Flag strong = Flag::unknown, separating = Flag::unknown, schurian = Flag::unknown;
  std::vector<std::string> certificate;

  std::size_t dim() const { return params.size(); }
  RElement<F> parameter(const std::vector<typename F::value_type>& c) const {
    return combine(base.quiver(), base.field(), base.dims(), base.dims(), params, c);
  }
  Representation<F> at(const std::vector<typename F::value_type>& c) const { return deform(base, parameter(c)); }
};

template <class F>
Cell<F> make_cell(Representation<F> base, std::vector<RElement<F>> params) {
  RowSpace<F> span(base.field(), r_dimension(base.quiver(), base.dims(), base.dims()));
  for (const auto& p : params) {
    check_relement(base.quiver(), p);
    if (p.source_dims != base.dims() || p.target_dims != base.dims()) throw std::invalid_argument("cell parameter outside R(T,T)");
    if (!span.insert(flatten(p))) throw std::invalid_argument("cell parameters are linearly dependent");
  }
  return Cell<F>{std::move(base), std::move(params)};
}

// A single representation; strong and separating follow exactly when it is Schurian.
template <class F>
Cell<F> point_cell(Representation<F> base) {
  Cell<F> c = make_cell(std::move(base), {});
  if (is_schurian(c.base)) {
    c.strong = c.separating = c.schurian = Flag::certified;
    c.certificate.push_back("single Schurian point");
  }
  return c;
}

template <class F>
struct Mosaic {
  DimVector dimvector;
  std::vector<Cell<F>> cells;
  std::vector<std::string> provenance;  // one entry per cell
  bool disjoint_verified = false;

  void add(Cell<F> c, std::string how) {
    if (cells.empty() && dimvector.empty()) dimvector = c.base.dims();
    if (c.base.dims() != dimvector) throw std::invalid_argument("cell dimension vector differs from the mosaic");
    cells.push_back(std::move(c));
    provenance.push_back(std::move(how));
  }
  std::vector<std::size_t> dimension_counts() const {
    std::vector<std::size_t> r;
    for (const auto& c : cells) {
      if (r.size() <= c.dim()) r.resize(c.dim() + 1, 0);
      ++r[c.dim()];
    }
    return r;
  }
};

// Reduction mod p. Flags are dropped: a check over Q does not transfer.
inline Cell<PrimeField> change_field(const Cell<Rationals>& c, const PrimeField& k) {
  std::vector<RElement<PrimeField>> ps;
  for (const auto& p : c.params) ps.push_back(change_field(p, k));
  return make_cell(change_field(c.base, k), std::move(ps));
}

inline Mosaic<PrimeField> change_field(const Mosaic<Rationals>& m, const PrimeField& k) {
  Mosaic<PrimeField> r;
  for (std::size_t i = 0; i < m.cells.size(); ++i) r.add(change_field(m.cells[i], k), m.provenance[i]);
  r.dimvector = m.dimvector;
  return r;
}

// ---- parameter sampling ----

template <class F>
struct ParamSample {
  std::vector<std::vector<typename F::value_type>> points;
  bool exhaustive = false;
};

// All F_p points when there are at most `cap`; otherwise (and always over Q) a
// deterministic grid or random sample that includes the origin.
template <class F>
ParamSample<F> sample_parameters(const F& k, std::size_t dim, std::size_t cap = 4096) {
  ParamSample<F> s;
  std::mt19937_64 rng(0xce11 + dim);
  if constexpr (std::is_same_v<F, PrimeField>) {
    std::uint64_t n = checked_power(k.order(), dim);
    if (n <= cap) {
      std::vector<std::uint32_t> d(dim);
      for (std::uint64_t i = 0; i < n; ++i) {
        decode_point(i, k.order(), d);
        s.points.emplace_back(d.begin(), d.end());
      }
      s.exhaustive = true;
      return s;
    }
    s.points.emplace_back(dim, 0u);
    for (std::size_t t = 1; t < cap; ++t) {
      std::vector<std::uint32_t> c(dim);
      for (auto& x : c) x = static_cast<std::uint32_t>(rng() % k.order());
      s.points.push_back(c);
    }
  } else {
    const long long side = 4;  // grid {-1, 0, 1, 2}
    std::uint64_t n = checked_power(side, dim);
    s.exhaustive = dim == 0;
    if (n <= cap) {
      std::vector<std::uint32_t> d(dim);
      for (std::uint64_t i = 0; i < n; ++i) {
        decode_point(i, side, d);
        std::vector<typename F::value_type> c;
        for (auto x : d) c.push_back(k.from_int(static_cast<long long>(x) - 1));
        s.points.push_back(c);
      }
    } else {
      s.points.emplace_back(dim, k.zero());
      std::uniform_int_distribution<long long> dist(-9, 9);
      for (std::size_t t = 1; t < cap; ++t) {
        std::vector<typename F::value_type> c;
        for (std::size_t i = 0; i < dim; ++i) c.push_back(k.from_int(dist(rng)));
        s.points.push_back(c);
      }
    }
  }
  return s;
}

template <class F>
struct Triple {
  RElement<F> tau, lambda, mu;
};

template <class F>
std::string describe(const Quiver& q, const F& k, const Triple<F>& t) {
  return "tau=(" + describe(q, k, t.tau) + ") lambda=(" + describe(q, k, t.lambda) + ") mu=(" + describe(q, k, t.mu) + ")";
}

// Points of U_NM x U_M x U_N.
template <class F>
std::pair<std::vector<Triple<F>>, bool> sample_triples(const Cell<F>& m, const Cell<F>& n, const std::vector<RElement<F>>& u_nm,
                                                       std::size_t cap = 4096) {
  const Quiver& q = m.base.quiver();
  const F& k = m.base.field();
  std::size_t a = u_nm.size(), b = m.dim(), c = n.dim();
  auto s = sample_parameters(k, a + b + c, cap);
  std::vector<Triple<F>> out;
  for (const auto& x : s.points) {
    std::vector<typename F::value_type> xa(x.begin(), x.begin() + a), xb(x.begin() + a, x.begin() + a + b),
        xc(x.begin() + a + b, x.end());
    out.push_back({combine(q, k, n.base.dims(), m.base.dims(), u_nm, xa), m.parameter(xb), n.parameter(xc)});
  }
  return {std::move(out), s.exhaustive};
}

inline bool disjoint_supports(const DimVector& a, const DimVector& b) {
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v] != 0 && b[v] != 0) return false;
  return true;
}

template <class F>
bool in_span(const std::vector<RElement<F>>& basis, const RElement<F>& x, const F& k) {
  RowSpace<F> s(k, flatten(x).size());
  for (const auto& b : basis) s.insert(flatten(b));
  return s.contains(flatten(x));
}

// ---- strong / separating hypotheses ----

struct CheckReport {
  bool ok = true;
  Flag flag = Flag::unknown;
  std::size_t samples = 0;
  bool exhaustive = false;
  std::vector<std::string> certificate;
  std::string witness;
};

// For each (tau, lambda, mu) in w: pi_{mu,lambda}(e + tau) != 0 and the map
// End(B) -> Hom(M(lambda), N(mu)) vanishes, B = B(e + tau, lambda, mu).
template <class F>
CheckReport check_strong_hypotheses(const Cell<F>& m, const Cell<F>& n, const RElement<F>& e, const std::vector<RElement<F>>& u_nm,
                                    const std::vector<Triple<F>>& w, bool w_is_everything) {
  const Quiver& q = m.base.quiver();
  const F& k = m.base.field();
  CheckReport r;
  r.samples = w.size();
  r.exhaustive = w_is_everything;
  bool disjoint = disjoint_supports(m.base.dims(), n.base.dims());
  for (const auto& t : w) {
    Representation<F> ml = deform(m.base, t.lambda), nm = deform(n.base, t.mu);
    RElement<F> et = e + t.tau;
    if (ExtPresentation<F>(nm, ml).is_split(et)) {
      r.ok = false;
      r.witness = "pi(e+tau) = 0 at " + describe(q, k, t);
      return r;
    }
    if (disjoint) continue;
    Representation<F> b = middle_term(m.base, n.base, et, t.lambda, t.mu);
    if (!theta_map(b, b, block_inclusion(ml, b), block_projection(b, nm)).is_zero()) {
      r.ok = false;
      r.witness = "End(B) -> Hom(M(lambda),N(mu)) is nonzero at " + describe(q, k, t);
      return r;
    }
  }
  Flag hyp = Flag::unknown;
  if (disjoint && !in_span(u_nm, e, k)) {
    hyp = Flag::certified;
    r.certificate.push_back("disjoint supports: the End(B) -> Hom maps vanish and pi is injective, e is outside span(U_NM)");
  } else if (w_is_everything) {
    hyp = Flag::certified;
    r.certificate.push_back("pi(e+tau) != 0 and End(B) -> Hom(M(lambda),N(mu)) zero on all " + std::to_string(w.size()) +
                            " points");
  } else {
    r.certificate.push_back("pi(e+tau) != 0 and End(B) -> Hom zero on " + std::to_string(w.size()) + " sampled points");
  }
  Flag inputs = weakest(m.strong, n.strong);
  if (inputs == Flag::unknown) r.certificate.push_back("input cells are not known to be strong");
  r.flag = weakest(inputs, hyp);
  return r;
}

template <class F>
CheckReport check_strong_hypotheses(const Cell<F>& m, const Cell<F>& n, const RElement<F>& e, const std::vector<RElement<F>>& u_nm,
                                    std::size_t cap = 4096) {
  auto [w, all] = sample_triples(m, n, u_nm, cap);
  return check_strong_hypotheses(m, n, e, u_nm, w, all);
}

struct SeparatingReport {
  bool ok = true;
  bool part_a = false;  // {e} x U_M x U_N
  bool part_b = false;  // (e + U_NM) x U_M x U_N
  bool confirmed = false;
  Flag flag = Flag::unknown;
  std::vector<std::string> certificate;
  std::string witness;
};

// Part (a) needs separating inputs. Part (b) additionally needs Schurian M(lambda),
// N(mu), e outside span(U_NM), and pi injective on span(e, U_NM) at every sample;
// the last is a sufficient form of universality. With `confirm` over F_p the
// middle terms are compared pairwise.
template <class F>
SeparatingReport check_separating(const Cell<F>& m, const Cell<F>& n, const RElement<F>& e, const std::vector<RElement<F>>& u_nm,
                                  bool confirm = false, const Budget& budget = {}, std::size_t cap = 4096) {
  const Quiver& q = m.base.quiver();
  const F& k = m.base.field();
  SeparatingReport r;
  Flag inputs = weakest(m.separating, n.separating);
  r.part_a = inputs != Flag::unknown;
  r.certificate.push_back(r.part_a ? "part (a): inputs separating, {e} x U_M x U_N separating"
                                   : "part (a): input cells are not known to be separating");

  bool hyps_exact = true;
  if (in_span(u_nm, e, k)) {
    r.certificate.push_back("part (b) precondition fails: e lies in span(U_NM)");
  } else {
    r.part_b = true;
    auto [w, all] = sample_triples(m, n, {}, cap);
    hyps_exact = all;
    for (const auto& t : w) {
      Representation<F> ml = deform(m.base, t.lambda), nm = deform(n.base, t.mu);
      if (!is_schurian(ml) || !is_schurian(nm)) {
        r.part_b = false;
        r.certificate.push_back("part (b) precondition fails: non-Schurian point " + describe(q, k, t));
        break;
      }
      ExtPresentation<F> ep(nm, ml);
      RowSpace<F> img(k, ep.r_dim());
      bool inj = img.insert(flatten(ep.pi_reduce(e)));
      for (const auto& x : u_nm) inj = inj && img.insert(flatten(ep.pi_reduce(x)));
      if (!inj) {
        r.part_b = false;
        r.certificate.push_back("part (b) precondition fails: pi not injective on span(e, U_NM) at " + describe(q, k, t));
        break;
      }
    }
    if (r.part_b)
      r.certificate.push_back(std::string("part (b): End = k, e outside span(U_NM), e + U_NM universal on ") +
                              (all ? "all " : "") + std::to_string(w.size()) + (all ? " points" : " sampled points"));
  }

  if (confirm) {
    if constexpr (!std::is_same_v<F, PrimeField>) {
      throw std::invalid_argument("exhaustive confirmation needs a finite field");
    } else {
      auto [w, all] = sample_triples(m, n, r.part_b ? u_nm : std::vector<RElement<F>>{}, budget.limit);
      if (!all) throw Undecided("check_separating: parameter space exceeds budget");
      std::vector<Representation<F>> bs;
      for (const auto& t : w) bs.push_back(middle_term(m.base, n.base, e + t.tau, t.lambda, t.mu));
      for (std::size_t i = 0; i < bs.size() && r.ok; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (is_isomorphic(bs[i], bs[j], budget)) {
            r.ok = false;
            r.witness = "isomorphic middle terms at " + describe(q, k, w[j]) + " and " + describe(q, k, w[i]);
            break;
          }
      r.confirmed = r.ok;
      if (r.ok) r.certificate.push_back("pairwise non-isomorphic on all " + std::to_string(bs.size()) + " points");
    }
  }
  if (!r.ok) return r;
  Flag theorem = (r.part_b && hyps_exact && inputs != Flag::unknown) ? weakest(inputs, Flag::certified) : Flag::unknown;
  r.flag = std::max(theorem, r.confirmed ? Flag::verified : Flag::unknown);
  return r;
}

// ---- Schubert cells ----

enum class StarSide { before, after };

// Row-reduced d x n pattern with unit columns at I (1-based). Free entries sit
// before the pivot in each row (or after it, the mirrored convention).
struct SchubertCell {
  std::vector<std::size_t> index;
  std::size_t n = 0, d = 0;
  StarSide side = StarSide::before;
  std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, column), 0-based

  std::size_t dim() const { return free.size(); }
  // 1 and 0 entries, -1 for a free coordinate.
  std::vector<std::vector<int>> pattern() const {
    std::vector<std::vector<int>> p(d, std::vector<int>(n, 0));
    for (std::size_t j = 0; j < d; ++j) p[j][index[j] - 1] = 1;
    for (auto [i, c] : free) p[i][c] = -1;
    return p;
  }
  template <class F>
  Matrix<F> point(const F& k, const std::vector<typename F::value_type>& c = {}) const {
    Matrix<F> a(k, d, n);
    for (std::size_t j = 0; j < d; ++j) a(j, index[j] - 1) = k.one();
    for (std::size_t f = 0; f < c.size() && f < free.size(); ++f) a(free[f].first, free[f].second) = c[f];
    return a;
  }
};

inline std::string render(const SchubertCell& s) {
  std::string out;
  for (const auto& row : s.pattern()) {
    out += "(";
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ",";
      out += row[j] < 0 ? "*" : std::to_string(row[j]);
    }
    out += ")";
  }
  return out;
}

inline SchubertCell schubert_cell(const std::vector<std::size_t>& index, std::size_t n, std::size_t d,
                                  StarSide side = StarSide::before) {
  if (index.size() != d) throw std::invalid_argument("schubert_cell: index list must have d entries");
  for (std::size_t j = 0; j < d; ++j) {
    if (index[j] < 1 || index[j] > n) throw std::invalid_argument("schubert_cell: index out of range");
    if (j && index[j] <= index[j - 1]) throw std::invalid_argument("schubert_cell: indices must increase strictly");
  }
  SchubertCell s{index, n, d, side, {}};
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t c = 0; c < n; ++c) {
      bool pivot = std::find(index.begin(), index.end(), c + 1) != index.end();
      if (pivot) continue;
      if (side == StarSide::before ? c + 1 < index[j] : c + 1 > index[j]) s.free.push_back({j, c});
    }
  return s;
}

inline std::vector<std::vector<std::size_t>> increasing_tuples(std::size_t n, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  if (d > n) return out;
  std::vector<std::size_t> t(d);
  for (std::size_t i = 0; i < d; ++i) t[i] = i + 1;
  while (true) {
    out.push_back(t);
    std::size_t i = d;
    while (i > 0 && t[i - 1] == n - d + i) --i;
    if (i == 0) break;
    ++t[i - 1];
    for (std::size_t j = i; j < d; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

// ---- Gamma functor and Grassmann mosaics ----

template <class F>
Representation<F> power(const Representation<F>& m, std::size_t d) {
  Representation<F> r(m.quiver(), m.field(), DimVector(m.dims().size(), 0));
  for (std::size_t i = 0; i < d; ++i) r = direct_sum(r, m);
  return r;
}

// x in R(N,M) placed in the j-th copy of M^d.
template <class F>
RElement<F> into_copy(const Quiver& q, const F& k, const RElement<F>& x, std::size_t j, std::size_t d) {
  DimVector t(x.target_dims);
  for (auto& v : t) v *= static_cast<long long>(d);
  RElement<F> r = zero_relement(q, k, x.source_dims, t);
  for (std::size_t a = 0; a < q.num_arrows(); ++a) r.blocks[a].set_block(j * x.blocks[a].rows(), 0, x.blocks[a]);
  return r;
}

// lambda in R(M,M) acting diagonally on M^d.
template <class F>
RElement<F> diagonal(const Quiver& q, const F& k, const RElement<F>& x, std::size_t d) {
  DimVector t(x.target_dims);
  for (auto& v : t) v *= static_cast<long long>(d);
  RElement<F> r = zero_relement(q, k, t, t);
  for (std::size_t a = 0; a < q.num_arrows(); ++a)
    for (std::size_t j = 0; j < d; ++j) r.blocks[a].set_block(j * x.blocks[a].rows(), j * x.blocks[a].cols(), x.blocks[a]);
  return r;
}

// Extension of N by M (x) k^d with class sum_i e_i (x) (i-th column of A).
template <class F>
Representation<F> gamma_extension(const Representation<F>& m, const Representation<F>& n, const std::vector<RElement<F>>& basis_e,
                                  const Matrix<F>& a) {
  const Quiver& q = m.quiver();
  const F& k = m.field();
  if (a.cols() != basis_e.size()) throw std::invalid_argument("gamma_extension: A needs one column per basis element");
  if (hom_dim(m, n) != 0) throw HypothesisFailure("gamma_extension: Hom(M,N) is nonzero");
  if (!is_schurian(m) || !is_schurian(n)) throw HypothesisFailure("gamma_extension: M and N must be Schurian");
  ExtPresentation<F> ep(n, m);
  auto sel = represent_basis(ep, basis_e);
  if (!sel.complete || sel.indices.size() != basis_e.size())
    throw HypothesisFailure("gamma_extension: the given elements do not represent a basis of Ext(N,M)");
  std::size_t d = a.rows();
  Representation<F> md = power(m, d);
  RElement<F> tau = zero_relement(n, md);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < basis_e.size(); ++i)
      if (!k.is_zero(a(j, i))) tau = tau + scaled(into_copy(q, k, basis_e[i], j, d), a(j, i));
  return middle_term(md, n, tau);
}

struct GrassmannOptions {
  std::size_t d = 1;
  StarSide side = StarSide::before;
  std::size_t sample_cap = 4096;
};

// Hypotheses on U_M x U_N: Schurian points, Hom(M(lambda),N(mu)) = 0 and u_nm a
// basis of Ext(N(mu),M(lambda)). Returns the strength of the check.
template <class F>
Flag check_grassmann_hypotheses(const Cell<F>& cm, const Cell<F>& cn, const std::vector<RElement<F>>& u_nm, std::size_t cap,
                                std::vector<std::string>& cert) {
  const Quiver& q = cm.base.quiver();
  const F& k = cm.base.field();
  for (const auto& x : u_nm)
    if (x.source_dims != cn.base.dims() || x.target_dims != cm.base.dims())
      throw std::invalid_argument("U_NM basis must lie in R(N,M)");
  bool disjoint = disjoint_supports(cm.base.dims(), cn.base.dims());
  bool schur_known = cm.schurian != Flag::unknown && cn.schurian != Flag::unknown;
  if (disjoint && schur_known) {
    ExtPresentation<F> ep(cn.base, cm.base);
    auto sel = represent_basis(ep, u_nm);
    if (!sel.complete || sel.indices.size() != u_nm.size())
      throw HypothesisFailure("U_NM does not represent a basis of Ext(N,M)");
    cert.push_back("disjoint supports: Hom(M(lambda),N(mu)) = 0 and U_NM universal; cells Schurian");
    return weakest(Flag::certified, weakest(cm.schurian, cn.schurian));
  }
  auto [w, all] = sample_triples(cm, cn, {}, cap);
  for (const auto& t : w) {
    Representation<F> ml = deform(cm.base, t.lambda), nm = deform(cn.base, t.mu);
    if (!is_schurian(ml) || !is_schurian(nm)) throw HypothesisFailure("non-Schurian point " + describe(q, k, t));
    if (hom_dim(ml, nm) != 0) throw HypothesisFailure("Hom(M(lambda),N(mu)) != 0 at " + describe(q, k, t));
    ExtPresentation<F> ep(nm, ml);
    auto sel = represent_basis(ep, u_nm);
    if (!sel.complete || sel.indices.size() != u_nm.size())
      throw HypothesisFailure("U_NM not universal at " + describe(q, k, t));
  }
  cert.push_back(std::string("Schurian, Hom(M(lambda),N(mu)) = 0, U_NM universal on ") + (all ? "all " : "") +
                 std::to_string(w.size()) + (all ? " points" : " sampled points"));
  return all ? Flag::certified : Flag::unknown;
}

// One cell per d-subset I of the basis of U_NM: base = middle term of
// sum_j e_{i_j} (x) f_j, parameters = free Schubert coordinates, then U_M acting
// diagonally on M^d, then U_N.
template <class F>
Mosaic<F> grassmann_mosaic(const Cell<F>& cm, const Cell<F>& cn, const std::vector<RElement<F>>& u_nm,
                           const GrassmannOptions& opt = {}) {
  const Quiver& q = cm.base.quiver();
  const F& k = cm.base.field();
  std::vector<std::string> cert;
  Flag hyp = check_grassmann_hypotheses(cm, cn, u_nm, opt.sample_cap, cert);
  Flag inputs = weakest(weakest(cm.strong, cn.strong), weakest(cm.separating, cn.separating));
  Flag flag = weakest(hyp, inputs);
  std::size_t d = opt.d;
  // d = 1: End(B) = k + Hom(N,M) for a nonsplit extension with End(M) = End(N) = k
  // and the End(B) -> Hom(M,N) maps zero; disjoint supports kill Hom(N,M).
  Flag schur = Flag::unknown;
  if (d == 1 && disjoint_supports(cm.base.dims(), cn.base.dims())) schur = weakest(flag, weakest(cm.schurian, cn.schurian));
  Representation<F> md = power(cm.base, d);
  Mosaic<F> mo;
  for (const auto& idx : increasing_tuples(u_nm.size(), d)) {
    SchubertCell sc = schubert_cell(idx, u_nm.size(), d, opt.side);
    Representation<F> b = gamma_extension(cm.base, cn.base, u_nm, sc.point(k));
    std::vector<RElement<F>> ps;
    for (auto [j, c] : sc.free)
      ps.push_back(embed_in_extension(q, k, md.dims(), cn.base.dims(), into_copy(q, k, u_nm[c], j, d), Block::NM));
    for (const auto& l : cm.params) ps.push_back(embed_in_extension(q, k, md.dims(), cn.base.dims(), diagonal(q, k, l, d), Block::MM));
    for (const auto& mu : cn.params) ps.push_back(embed_in_extension(q, k, md.dims(), cn.base.dims(), mu, Block::NN));
    Cell<F> c = make_cell(std::move(b), std::move(ps));
    c.strong = c.separating = flag;
    c.schurian = schur;
    c.certificate = cert;
    c.certificate.push_back("Grassmann cell " + render(sc) + ", dim " + std::to_string(sc.dim()) + " + " +
                            std::to_string(cm.dim()) + " + " + std::to_string(cn.dim()));
    std::string i_str;
    for (auto i : idx) i_str += (i_str.empty() ? "" : ",") + std::to_string(i);
    mo.add(std::move(c), "grassmann_mosaic I=(" + i_str + ")");
  }
  if (mo.cells.empty()) mo.dimvector = md.dims();
  return mo;
}

// S = quotient, T = sub; treebasis in R(S,T) of single matrix units. B_i is the
// middle term of e_i with parameters e_1..e_{i-1} (before) or e_{i+1}..e_n.
template <class F>
Mosaic<F> tree_cell_recursion(const Cell<F>& cs, const Cell<F>& ct, const std::vector<RElement<F>>& treebasis,
                              StarSide side = StarSide::before, std::size_t cap = 4096) {
  const F& k = cs.base.field();
  for (const auto& e : treebasis) {
    std::size_t nz = 0;
    for (const auto& b : e.blocks)
      for (const auto& x : b.data()) {
        if (k.is_zero(x)) continue;
        if (!k.is_one(x)) throw std::invalid_argument("tree basis elements must be matrix units");
        ++nz;
      }
    if (nz != 1) throw std::invalid_argument("tree basis elements must be matrix units");
  }
  for (const auto* c : {&cs, &ct})
    if (!is_tree(coefficient_quiver(c->base))) throw HypothesisFailure("base of an input cell is not a tree module");
  GrassmannOptions opt;
  opt.side = side;
  opt.sample_cap = cap;
  Mosaic<F> mo = grassmann_mosaic(ct, cs, treebasis, opt);
  for (std::size_t i = 0; i < mo.cells.size(); ++i) {
    auto lq = coefficient_quiver(mo.cells[i].base);
    if (!is_tree(lq)) throw std::logic_error("tree_cell_recursion: middle term is not a tree module");
    mo.provenance[i] = "tree_cell_recursion i=" + std::to_string(i + 1);
  }
  return mo;
}

// ---- the subspace quivers ----

// The quiver `big` must contain m's quiver as a prefix of vertices and arrows.
inline void check_prefix(const Quiver& small, const Quiver& big) {
  if (small.num_vertices() > big.num_vertices() || small.num_arrows() > big.num_arrows())
    throw std::invalid_argument("quiver is not a prefix of the target quiver");
  for (std::size_t v = 0; v < small.num_vertices(); ++v)
    if (small.vertex_id(v) != big.vertex_id(v)) throw std::invalid_argument("quiver is not a prefix of the target quiver");
  for (std::size_t a = 0; a < small.num_arrows(); ++a) {
    const auto &x = small.arrow(a), &y = big.arrow(a);
    if (x.id != y.id || x.src != y.src || x.tgt != y.tgt) throw std::invalid_argument("quiver is not a prefix of the target quiver");
  }
}

template <class F>
Representation<F> extend_quiver(const Representation<F>& m, const Quiver& big) {
  check_prefix(m.quiver(), big);
  DimVector d(m.dims());
  d.resize(big.num_vertices(), 0);
  Representation<F> r(big, m.field(), d);
  for (std::size_t a = 0; a < m.quiver().num_arrows(); ++a) r.set_map(a, m.map(a));
  return r;
}

template <class F>
RElement<F> extend_quiver(const RElement<F>& x, const Quiver& small, const Quiver& big, const F& k) {
  check_prefix(small, big);
  DimVector s(x.source_dims), t(x.target_dims);
  s.resize(big.num_vertices(), 0);
  t.resize(big.num_vertices(), 0);
  RElement<F> r = zero_relement(big, k, s, t);
  for (std::size_t a = 0; a < small.num_arrows(); ++a) r.blocks[a] = x.blocks[a];
  return r;
}

template <class F>
Cell<F> extend_quiver(const Cell<F>& c, const Quiver& big) {
  std::vector<RElement<F>> ps;
  for (const auto& p : c.params) ps.push_back(extend_quiver(p, c.base.quiver(), big, c.base.field()));
  Cell<F> r = make_cell(extend_quiver(c.base, big), std::move(ps));
  r.strong = c.strong;
  r.separating = c.separating;
  r.schurian = c.schurian;
  r.certificate = c.certificate;
  return r;
}

// S(n), dimension vector (2,1,...,1): the unique indecomposable at n = 3, then one
// step per added line: every cell splits in two via the new simple, and each
// partition I + J of {1..n} with 1 in I and J nonempty adds a point cell.
template <class F>
Mosaic<F> subspace_tnf(const F& k, std::size_t n) {
  if (n < 3) throw std::invalid_argument("subspace_tnf needs n >= 3");
  Mosaic<F> mo;
  mo.add(point_cell(make_rep(quivers::subspace(3), k, {2, 1, 1, 1}, {{{1}, {0}}, {{0}, {1}}, {{1}, {1}}})), "base T_1 for n=3");
  for (std::size_t m = 3; m < n; ++m) {
    Quiver big = quivers::subspace(m + 1);
    Cell<F> cs = point_cell(simple(big, k, m + 1));
    DimVector sd = cs.base.dims(), td(m + 2, 1);
    td[0] = 2;
    td[m + 1] = 0;
    std::vector<RElement<F>> basis{standard_relement(big, k, sd, td, m, 0, 0), standard_relement(big, k, sd, td, m, 1, 0)};
    Mosaic<F> next;
    for (std::size_t i = 0; i < mo.cells.size(); ++i) {
      auto sub = tree_cell_recursion(cs, extend_quiver(mo.cells[i], big), basis);
      for (std::size_t j = 0; j < sub.cells.size(); ++j)
        next.add(std::move(sub.cells[j]), "n=" + std::to_string(m + 1) + " from cell " + std::to_string(i + 1) + ", e" +
                                              std::to_string(j + 1));
    }
    for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (m - 1)); ++mask) {
      // bit b set: line b+2 belongs to I
      std::vector<std::vector<std::vector<long long>>> maps;
      std::string is = "1", js;
      maps.push_back({{1}, {0}});
      for (std::size_t l = 2; l <= m; ++l) {
        bool in_i = (mask >> (l - 2)) & 1;
        maps.push_back(in_i ? std::vector<std::vector<long long>>{{1}, {0}} : std::vector<std::vector<long long>>{{0}, {1}});
        (in_i ? is : js) += (in_i ? "," : (js.empty() ? "" : ",")) + std::to_string(l);
      }
      maps.push_back({{1}, {1}});
      DimVector dv(m + 2, 1);
      dv[0] = 2;
      next.add(point_cell(make_rep(big, k, dv, maps)), "n=" + std::to_string(m + 1) + " partition I={" + is + "} J={" + js + "}");
    }
    mo = std::move(next);
  }
  return mo;
}

// ---- exhaustive verification over F_p ----

// Strong: every point indecomposable; separating: points pairwise non-isomorphic.
inline CheckReport verify_cell(Cell<PrimeField>& c, const Budget& budget = {}) {
  const PrimeField& k = c.base.field();
  CheckReport r;
  require_budget(k.order(), c.dim(), budget, "verify_cell");
  auto s = sample_parameters(k, c.dim(), budget.limit);
  r.samples = s.points.size();
  r.exhaustive = true;
  std::vector<Representation<PrimeField>> pts;
  for (const auto& x : s.points) {
    auto m = c.at(x);
    if (!is_indecomposable(m, budget)) {
      r.ok = false;
      r.witness = "decomposable point " + describe(c.base.quiver(), k, c.parameter(x));
      return r;
    }
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (is_isomorphic(m, pts[j], budget)) {
        r.ok = false;
        r.witness = "isomorphic points " + describe(c.base.quiver(), k, c.parameter(s.points[j])) + " and " +
                    describe(c.base.quiver(), k, c.parameter(x));
        return r;
      }
    pts.push_back(std::move(m));
  }
  r.flag = Flag::verified;
  r.certificate.push_back("all " + std::to_string(pts.size()) + " points indecomposable and pairwise non-isomorphic over F_" +
                          std::to_string(k.order()));
  c.strong = std::max(c.strong, Flag::verified);
  c.separating = std::max(c.separating, Flag::verified);
  return r;
}

struct TNFReport {
  Mosaic<PrimeField> mosaic;
  std::uint32_t q = 0;
  std::uint64_t points = 0;
  std::uint64_t indecomposable_points = 0;  // absolutely indecomposable
  std::uint64_t uncovered_points = 0;
  std::size_t members = 0;
  std::size_t non_indecomposable_members = 0;
  std::size_t covered = 0;
  std::size_t total_indec_classes = 0;
  std::size_t multiply_covered = 0;
  std::size_t non_absolute_classes = 0;  // indecomposable but not absolutely; outside the count
  std::vector<std::string> overlaps;

  bool verified() const {
    return covered == total_indec_classes && multiply_covered == 0 && uncovered_points == 0 && non_indecomposable_members == 0;
  }
};

// Lists every T_i(lambda), lambda in U_i(F_q), groups them into isomorphism
// classes, and matches every absolutely indecomposable point of R_alpha(F_q)
// against them. The class total is sum over those points of |Aut|/|GL_alpha|.
inline TNFReport verify_mosaic(const Mosaic<PrimeField>& mosaic, const Budget& budget = {}, unsigned shards = 1) {
  if (mosaic.cells.empty()) throw std::invalid_argument("verify_mosaic: empty mosaic");
  TNFReport r;
  r.mosaic = mosaic;
  const PrimeField& k = mosaic.cells.front().base.field();
  const Quiver& q = mosaic.cells.front().base.quiver();
  r.q = k.order();

  struct Member {
    std::size_t cell;
    std::string where;
    Representation<PrimeField> rep;
  };
  std::vector<Member> reps;  // one per class
  std::vector<bool> bad_cell(mosaic.cells.size(), false);
  for (std::size_t i = 0; i < mosaic.cells.size(); ++i) {
    const auto& c = mosaic.cells[i];
    require_budget(k.order(), c.dim(), budget, "verify_mosaic cell points");
    for (const auto& x : sample_parameters(k, c.dim(), budget.limit).points) {
      ++r.members;
      auto m = c.at(x);
      std::string where = "cell " + std::to_string(i + 1) + " at " + describe(q, k, c.parameter(x));
      if (!is_indecomposable(m, budget)) {
        ++r.non_indecomposable_members;
        bad_cell[i] = true;
        continue;
      }
      bool dup = false;
      for (const auto& o : reps)
        if (is_isomorphic(m, o.rep, budget)) {
          ++r.multiply_covered;
          r.overlaps.push_back(where + " ~ " + o.where);
          bad_cell[i] = bad_cell[o.cell] = true;
          dup = true;
          break;
        }
      if (!dup) reps.push_back({i, where, std::move(m)});
    }
  }
  r.covered = reps.size();

  struct Acc {
    mpq_class classes = 0, other = 0;
    std::uint64_t points = 0, indec = 0, uncovered = 0;
  };
  const DimVector& alpha = mosaic.dimvector;
  mpz_class gl = gl_order(k.order(), alpha);
  Acc acc = accumulate_points(
      q, k, alpha, shards, Acc{},
      [&](Acc& a, const Representation<PrimeField>& m) {
        ++a.points;
        auto e = analyze_end(m, budget, false);
        if (!e.is_local) return;
        if (!e.is_absolutely_indec) {
          a.other += mpq_class(e.unit_count, gl);
          return;
        }
        ++a.indec;
        a.classes += mpq_class(e.unit_count, gl);
        for (const auto& o : reps)
          if (is_isomorphic(m, o.rep, budget)) return;
        ++a.uncovered;
      },
      [](Acc& a, Acc&& b) {
        a.classes += b.classes;
        a.other += b.other;
        a.points += b.points;
        a.indec += b.indec;
        a.uncovered += b.uncovered;
      },
      budget);
  acc.classes.canonicalize();
  acc.other.canonicalize();
  if (acc.classes.get_den() != 1 || acc.other.get_den() != 1) throw std::logic_error("verify_mosaic: class count is not an integer");
  r.points = acc.points;
  r.indecomposable_points = acc.indec;
  r.uncovered_points = acc.uncovered;
  r.total_indec_classes = acc.classes.get_num().get_ui();
  r.non_absolute_classes = acc.other.get_num().get_ui();
  for (std::size_t i = 0; i < r.mosaic.cells.size(); ++i) {
    if (bad_cell[i]) continue;
    auto& c = r.mosaic.cells[i];
    c.strong = std::max(c.strong, Flag::verified);
    c.separating = std::max(c.separating, Flag::verified);
  }
  r.mosaic.disjoint_verified = r.multiply_covered == 0;
  return r;
}

}  // namespace quivercells
