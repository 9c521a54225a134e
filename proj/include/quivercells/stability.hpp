#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "enumerate.hpp"
#include "ext.hpp"
#include "homalg.hpp"
#include "points.hpp"

namespace quivercells {

using StabilityWeights = std::vector<long long>;

inline mpq_class slope(const StabilityWeights& theta, const DimVector& alpha) {
  if (theta.size() != alpha.size()) throw std::invalid_argument("theta and dimension vector differ in length");
  long long d = total_dim(alpha), t = 0;
  if (d == 0) throw std::invalid_argument("slope of the zero dimension vector");
  for (std::size_t i = 0; i < alpha.size(); ++i) t += theta[i] * alpha[i];
  mpq_class r(static_cast<long>(t), static_cast<unsigned long>(d));
  r.canonicalize();
  return r;
}

// A subrepresentation, one reduced row basis per vertex.
using SubspaceTuple = std::vector<RowSpace<PrimeField>>;

inline DimVector subspace_dims(const SubspaceTuple& u) {
  DimVector d;
  for (const auto& s : u) d.push_back(static_cast<long long>(s.dim()));
  return d;
}

namespace detail {

inline Vec<PrimeField> apply(const Matrix<PrimeField>& m, const Vec<PrimeField>& v) { return m * v; }

}  // namespace detail

// Visits every subrepresentation of m. Vertices are fixed in index order; at each
// one the admissible subspaces lie between the images of earlier sources and the
// preimages of earlier targets. Returning false from fn stops the walk.
template <class Fn>
void for_each_subrep(const Representation<PrimeField>& m, Fn&& fn, const Budget& budget = {}) {
  const Quiver& q = m.quiver();
  const PrimeField& k = m.field();
  std::size_t n = q.num_vertices();
  SubspaceTuple chosen;
  chosen.reserve(n);
  std::uint64_t visited = 0;
  bool stop = false;

  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (stop) return;
    if (++visited > budget.limit) throw Undecided("subrepresentation enumeration exceeds budget " + std::to_string(budget.limit));
    if (v == n) {
      if (!fn(static_cast<const SubspaceTuple&>(chosen))) stop = true;
      return;
    }
    std::size_t mv = m.dim(v);
    RowSpace<PrimeField> lower(k, mv);
    std::vector<Vec<PrimeField>> cond_rows;  // x in upper iff every row . x = 0
    std::vector<std::size_t> loops;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& ar = q.arrow(a);
      if (ar.src == v && ar.tgt == v) {
        loops.push_back(a);
        continue;
      }
      if (ar.tgt == v && ar.src < v)
        for (const auto& u : chosen[ar.src].rows()) lower.insert(detail::apply(m.map(a), u));
      if (ar.src == v && ar.tgt < v) {
        // x -> reduce_{U_t}(M_a x), as a matrix with columns reduce(M_a e_j)
        const auto& ut = chosen[ar.tgt];
        std::size_t mt = m.dim(ar.tgt);
        Matrix<PrimeField> c(k, mt, mv);
        for (std::size_t j = 0; j < mv; ++j) {
          Vec<PrimeField> col(mt);
          for (std::size_t i = 0; i < mt; ++i) col[i] = m.map(a)(i, j);
          col = ut.reduce(col);
          for (std::size_t i = 0; i < mt; ++i) c(i, j) = col[i];
        }
        for (std::size_t i = 0; i < mt; ++i) cond_rows.push_back(c.row(i));
      }
    }
    std::vector<Vec<PrimeField>> upper;
    if (cond_rows.empty()) {
      for (std::size_t j = 0; j < mv; ++j) {
        Vec<PrimeField> e(mv, 0);
        e[j] = 1;
        upper.push_back(e);
      }
    } else {
      upper = kernel_basis(Matrix<PrimeField>::from_rows(k, cond_rows, mv));
    }
    RowSpace<PrimeField> up(k, mv);
    for (const auto& x : upper) up.insert(x);
    for (const auto& x : lower.rows())
      if (!up.contains(x)) return;
    std::vector<Vec<PrimeField>> comp;
    {
      RowSpace<PrimeField> s = lower;
      for (const auto& x : up.rows())
        if (s.insert(x)) comp.push_back(x);
    }
    for_each_subspace(k, comp.size(), [&](const std::vector<Vec<PrimeField>>& w) {
      RowSpace<PrimeField> u = lower;
      for (const auto& row : w) {
        Vec<PrimeField> x(mv, 0);
        for (std::size_t i = 0; i < comp.size(); ++i)
          if (row[i])
            for (std::size_t j = 0; j < mv; ++j) x[j] = k.add(x[j], k.mul(row[i], comp[i][j]));
        u.insert(x);
      }
      for (auto a : loops)
        for (const auto& x : u.rows())
          if (!u.contains(detail::apply(m.map(a), x))) return true;
      chosen.push_back(std::move(u));
      rec(v + 1);
      chosen.pop_back();
      return !stop;
    });
  };
  rec(0);
}

inline Representation<PrimeField> subrepresentation(const Representation<PrimeField>& m, const SubspaceTuple& u) {
  const Quiver& q = m.quiver();
  const PrimeField& k = m.field();
  Representation<PrimeField> s(q, k, subspace_dims(u));
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    const auto& us = u[ar.src];
    const auto& ut = u[ar.tgt];
    for (std::size_t j = 0; j < us.dim(); ++j) {
      auto y = m.map(a) * us.rows()[j];
      if (!ut.contains(y)) throw std::invalid_argument("subspaces are not closed under the arrow maps");
      for (std::size_t i = 0; i < ut.dim(); ++i) s.map(a)(i, j) = y[ut.pivots()[i]];
    }
  }
  return s;
}

inline std::vector<std::size_t> non_pivots(const RowSpace<PrimeField>& u) {
  std::vector<std::size_t> r;
  std::size_t p = 0;
  for (std::size_t j = 0; j < u.ambient(); ++j) {
    if (p < u.pivots().size() && u.pivots()[p] == j) {
      ++p;
      continue;
    }
    r.push_back(j);
  }
  return r;
}

inline Representation<PrimeField> quotient_representation(const Representation<PrimeField>& m, const SubspaceTuple& u) {
  const Quiver& q = m.quiver();
  const PrimeField& k = m.field();
  DimVector d;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) d.push_back(static_cast<long long>(m.dim(v) - u[v].dim()));
  Representation<PrimeField> r(q, k, d);
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    auto cs = non_pivots(u[ar.src]), ct = non_pivots(u[ar.tgt]);
    for (std::size_t j = 0; j < cs.size(); ++j) {
      Vec<PrimeField> x(m.dim(ar.src), 0);
      x[cs[j]] = 1;
      auto y = u[ar.tgt].reduce(m.map(a) * x);
      for (std::size_t i = 0; i < ct.size(); ++i) r.map(a)(i, j) = y[ct[i]];
    }
  }
  return r;
}

enum class Stability { stable, semistable, unstable };

inline std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::semistable: return "semistable";
    default: return "unstable";
  }
}

// Stable: every proper nonzero subrepresentation has strictly smaller slope.
inline Stability is_stable(const Representation<PrimeField>& m, const StabilityWeights& theta, const Budget& budget = {}) {
  if (m.total_dim() == 0) throw std::invalid_argument("stability of the zero representation");
  mpq_class mu = slope(theta, m.dims());
  long long total = m.total_dim();
  Stability r = Stability::stable;
  for_each_subrep(
      m,
      [&](const SubspaceTuple& u) {
        auto d = subspace_dims(u);
        long long t = total_dim(d);
        if (t == 0 || t == total) return true;
        mpq_class s = slope(theta, d);
        if (s > mu) {
          r = Stability::unstable;
          return false;
        }
        if (s == mu) r = Stability::semistable;
        return true;
      },
      budget);
  return r;
}

// The subrepresentation of maximal slope and, among those, maximal dimension.
inline SubspaceTuple scss(const Representation<PrimeField>& m, const StabilityWeights& theta, const Budget& budget = {}) {
  std::optional<SubspaceTuple> best;
  mpq_class best_slope;
  long long best_dim = 0;
  for_each_subrep(
      m,
      [&](const SubspaceTuple& u) {
        auto d = subspace_dims(u);
        long long t = total_dim(d);
        if (t == 0) return true;
        mpq_class s = slope(theta, d);
        if (!best || s > best_slope || (s == best_slope && t > best_dim)) {
          best = u;
          best_slope = s;
          best_dim = t;
        }
        return true;
      },
      budget);
  if (!best) throw std::invalid_argument("scss of the zero representation");
  return *best;
}

struct HNData {
  std::vector<Representation<PrimeField>> subquotients;  // M_1, M_2/M_1, ...
  std::vector<DimVector> filtration;                      // dimension vectors of M_1 ⊂ M_2 ⊂ ... ⊂ M
  std::vector<mpq_class> slopes;
  std::size_t length() const { return subquotients.size(); }
};

inline HNData scss_and_hn(const Representation<PrimeField>& m, const StabilityWeights& theta, const Budget& budget = {}) {
  HNData h;
  Representation<PrimeField> rest = m;
  DimVector acc(m.dims().size(), 0);
  while (rest.total_dim() > 0) {
    auto u = scss(rest, theta, budget);
    auto sub = subrepresentation(rest, u);
    auto quo = quotient_representation(rest, u);
    if (hom_dim(sub, quo) != 0) throw std::logic_error("Hom(scss, M/scss) is nonzero");
    for (std::size_t v = 0; v < acc.size(); ++v) acc[v] += sub.dims()[v];
    h.slopes.push_back(slope(theta, sub.dims()));
    h.subquotients.push_back(std::move(sub));
    h.filtration.push_back(acc);
    rest = std::move(quo);
  }
  for (std::size_t i = 1; i < h.slopes.size(); ++i)
    if (!(h.slopes[i] < h.slopes[i - 1])) throw std::logic_error("HN slopes are not strictly decreasing");
  return h;
}

// Largest endomorphism dimension among indecomposable points of R_alpha(F_p).
inline std::size_t schur_level(const Quiver& q, const DimVector& alpha, std::uint32_t p, const Budget& budget = {}) {
  PrimeField k(p);
  std::size_t best = 0;
  for_each_point(
      q, k, alpha,
      [&](const Representation<PrimeField>& m) {
        auto e = analyze_end(m, budget, true);
        if (e.is_local && e.end_dim > best) best = e.end_dim;
        return true;
      },
      budget);
  return best;
}

}  // namespace quivercells
