#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cells.hpp"
#include "homalg.hpp"
#include "points.hpp"

namespace quivercells {

struct KacSample {
  std::uint32_t q = 0;
  DimVector alpha;
  mpq_class indec_classes = 0;      // indecomposable isomorphism classes
  mpz_class abs_indec_classes = 0;  // absolutely indecomposable ones
  mpq_class all_classes = 0;        // every isomorphism class (Burnside)
  mpz_class point_count = 0;
};

// Sum over points of |Aut(M)| / |GL_alpha(F_p)|, restricted to indecomposable and to
// absolutely indecomposable points. Each orbit contributes exactly 1.
inline KacSample count_classes(const Quiver& q, const DimVector& alpha, std::uint32_t p, const Budget& budget = {},
                               unsigned shards = 1) {
  PrimeField k(p);
  struct Acc {
    mpz_class indec = 0, abs = 0, all = 0;  // numerators over |GL|
    std::uint64_t points = 0;
  };
  Acc acc = accumulate_points(
      q, k, alpha, shards, Acc{},
      [&](Acc& a, const Representation<PrimeField>& m) {
        ++a.points;
        auto e = analyze_end(m, budget, false);
        a.all += e.unit_count;
        if (!e.is_local) return;
        a.indec += e.unit_count;
        if (e.is_absolutely_indec) a.abs += e.unit_count;
      },
      [](Acc& a, Acc&& b) {
        a.indec += b.indec;
        a.abs += b.abs;
        a.all += b.all;
        a.points += b.points;
      },
      budget);
  mpz_class gl = gl_order(p, alpha);
  KacSample s;
  s.q = p;
  s.alpha = alpha;
  s.indec_classes = mpq_class(acc.indec, gl);
  s.indec_classes.canonicalize();
  s.all_classes = mpq_class(acc.all, gl);
  s.all_classes.canonicalize();
  mpq_class abs(acc.abs, gl);
  abs.canonicalize();
  s.point_count = static_cast<unsigned long>(acc.points);
  if (s.indec_classes.get_den() != 1 || abs.get_den() != 1 || s.all_classes.get_den() != 1)
    throw std::logic_error("count_classes: orbit weights do not sum to an integer");
  s.abs_indec_classes = abs.get_num();
  return s;
}

inline long long default_degree_bound(const Quiver& q, const DimVector& alpha) {
  return std::max(0LL, 1 - euler_form(q, alpha, alpha));
}

struct KacReport {
  std::vector<KacSample> samples;
  std::optional<std::vector<mpz_class>> polynomial;  // c_0, c_1, ...
  long long degree_bound_used = 0;
  bool nonnegative = false;
  bool trusted = false;  // more samples than unknowns, and all of them fit
  std::string note;
};

inline mpq_class evaluate(const std::vector<mpq_class>& c, const mpq_class& x) {
  mpq_class r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

// Exact Lagrange interpolation of the absolutely indecomposable counts through the
// first degree_bound + 1 samples; further samples are checked against the result.
inline KacReport interpolate(const std::vector<KacSample>& samples, long long degree_bound) {
  if (degree_bound < 0) throw std::invalid_argument("degree bound must be nonnegative");
  std::size_t need = static_cast<std::size_t>(degree_bound) + 1;
  if (samples.size() < need) throw std::invalid_argument("interpolation needs at least degree_bound + 1 samples");
  std::set<std::uint32_t> qs;
  for (const auto& s : samples)
    if (!qs.insert(s.q).second) throw std::invalid_argument("interpolation samples need distinct q");
  KacReport r;
  r.samples = samples;
  r.degree_bound_used = degree_bound;
  std::vector<mpq_class> coeff(need, 0);
  for (std::size_t i = 0; i < need; ++i) {
    // basis polynomial prod_{j != i} (x - q_j) / (q_i - q_j)
    std::vector<mpq_class> basis{1};
    mpq_class denom = 1;
    for (std::size_t j = 0; j < need; ++j) {
      if (j == i) continue;
      std::vector<mpq_class> next(basis.size() + 1, 0);
      for (std::size_t t = 0; t < basis.size(); ++t) {
        next[t + 1] += basis[t];
        next[t] -= basis[t] * samples[j].q;
      }
      basis = std::move(next);
      denom *= mpq_class(static_cast<long>(samples[i].q) - static_cast<long>(samples[j].q));
    }
    mpq_class y(samples[i].abs_indec_classes);
    for (std::size_t t = 0; t < need; ++t) coeff[t] += basis[t] * y / denom;
  }
  for (auto& c : coeff) c.canonicalize();
  for (std::size_t i = need; i < samples.size(); ++i)
    if (evaluate(coeff, samples[i].q) != mpq_class(samples[i].abs_indec_classes)) {
      r.note = "sample at q=" + std::to_string(samples[i].q) + " does not fit; degree bound too small or counting error";
      return r;
    }
  std::vector<mpz_class> ints;
  for (const auto& c : coeff) {
    if (c.get_den() != 1) {
      r.note = "non-integral coefficient; degree bound too small or counting error";
      return r;
    }
    ints.push_back(c.get_num());
  }
  while (ints.size() > 1 && ints.back() == 0) ints.pop_back();
  r.nonnegative = std::all_of(ints.begin(), ints.end(), [](const mpz_class& c) { return c >= 0; });
  r.polynomial = std::move(ints);
  r.trusted = samples.size() > need;
  if (!r.trusted) r.note = "exactly determined; add a sample prime to confirm";
  return r;
}

inline std::string polynomial_string(const std::vector<mpz_class>& c) {
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    mpz_class a = abs(c[i]);
    if (!s.empty()) s += c[i] < 0 ? " - " : " + ";
    else if (c[i] < 0) s += "-";
    if (i == 0 || a != 1) s += a.get_str();
    if (i >= 1) s += "q";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

struct CoefficientVerdict {
  std::size_t degree = 0;
  mpz_class coefficient = 0;
  std::size_t cells = 0;
  bool match = false;
};

struct CrosscheckVerdict {
  mpz_class value_at_one = 0;
  std::size_t cell_count = 0;
  bool total_match = false;
  std::vector<CoefficientVerdict> coefficients;
  bool all_match() const {
    return total_match && std::all_of(coefficients.begin(), coefficients.end(), [](const auto& c) { return c.match; });
  }
};

// a(1) against the number of cells, c_i against the number of i-dimensional cells.
template <class F>
CrosscheckVerdict crosscheck_cells(const KacReport& report, const Mosaic<F>& mosaic) {
  if (!report.polynomial) throw std::invalid_argument("crosscheck_cells needs an interpolated polynomial");
  const auto& c = *report.polynomial;
  CrosscheckVerdict v;
  for (const auto& x : c) v.value_at_one += x;
  v.cell_count = mosaic.cells.size();
  v.total_match = v.value_at_one == static_cast<unsigned long>(v.cell_count);
  auto counts = mosaic.dimension_counts();
  for (std::size_t i = 0; i < std::max(c.size(), counts.size()); ++i) {
    CoefficientVerdict cv;
    cv.degree = i;
    cv.coefficient = i < c.size() ? c[i] : mpz_class(0);
    cv.cells = i < counts.size() ? counts[i] : 0;
    cv.match = cv.coefficient == static_cast<unsigned long>(cv.cells);
    v.coefficients.push_back(cv);
  }
  return v;
}

}  // namespace quivercells
