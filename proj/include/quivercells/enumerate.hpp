#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace quivercells {

// Raised when an enumeration would exceed its budget; callers report the
// question as undecided instead of guessing.
class Undecided : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Budget {
  std::uint64_t limit = 10'000'000;
};

// q^e, saturating at UINT64_MAX.
inline std::uint64_t checked_power(std::uint64_t q, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / q) return UINT64_MAX;
    r *= q;
  }
  return r;
}

inline void require_budget(std::uint64_t q, std::uint64_t e, const Budget& b, const std::string& what) {
  std::uint64_t n = checked_power(q, e);
  if (n > b.limit)
    throw Undecided(what + ": enumeration of " + std::to_string(q) + "^" + std::to_string(e) + " points exceeds budget " +
                    std::to_string(b.limit));
}

// Visits every F_p-linear combination of `basis` (each a flat vector). The
// callback gets the coefficient digits and the combination; returning false stops.
template <class Fn>
void for_each_combination(const PrimeField& k, const std::vector<Vec<PrimeField>>& basis, std::size_t len, Fn&& fn) {
  std::vector<std::uint32_t> digits(basis.size(), 0);
  Vec<PrimeField> cur(len, 0);
  while (true) {
    if (!fn(static_cast<const std::vector<std::uint32_t>&>(digits), static_cast<const Vec<PrimeField>&>(cur))) return;
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      // Incrementing or wrapping a digit both amount to adding its basis vector once.
      for (std::size_t j = 0; j < len; ++j)
        if (basis[i][j]) cur[j] = k.add(cur[j], basis[i][j]);
      if (++digits[i] < k.order()) break;
      digits[i] = 0;
    }
    if (i == digits.size()) return;
  }
}

// Index -> element of F_p^n, least significant digit first.
inline void decode_point(std::uint64_t index, std::uint32_t p, std::vector<std::uint32_t>& out) {
  for (auto& x : out) {
    x = static_cast<std::uint32_t>(index % p);
    index /= p;
  }
}

// All subspaces of F_p^n, each as a basis in reduced echelon form (rows).
// Subspaces are produced by dimension, then pivot set, then free entries.
template <class Fn>
void for_each_subspace(const PrimeField& k, std::size_t n, Fn&& fn) {
  for (std::size_t d = 0; d <= n; ++d) {
    std::vector<std::size_t> piv(d);
    for (std::size_t i = 0; i < d; ++i) piv[i] = i;
    while (true) {
      // free entries: row i, columns j > piv[i] that are not pivots
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = piv[i] + 1; j < n; ++j) {
          bool is_piv = false;
          for (auto c : piv) is_piv |= (c == j);
          if (!is_piv) free.push_back({i, j});
        }
      std::vector<std::uint32_t> val(free.size(), 0);
      while (true) {
        std::vector<Vec<PrimeField>> rows(d, Vec<PrimeField>(n, 0));
        for (std::size_t i = 0; i < d; ++i) rows[i][piv[i]] = 1;
        for (std::size_t f = 0; f < free.size(); ++f) rows[free[f].first][free[f].second] = val[f];
        if (!fn(static_cast<const std::vector<Vec<PrimeField>>&>(rows))) return;
        std::size_t f = 0;
        for (; f < val.size(); ++f) {
          if (++val[f] < k.order()) break;
          val[f] = 0;
        }
        if (f == val.size()) break;
      }
      // next pivot combination
      std::size_t i = d;
      while (i > 0 && piv[i - 1] == n - d + i - 1) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < d; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
}

inline std::uint64_t count_subspaces(std::uint32_t p, std::size_t n) {
  // sum of Gaussian binomials
  std::uint64_t total = 0;
  for (std::size_t d = 0; d <= n; ++d) {
    std::uint64_t num = 1, den = 1;
    for (std::size_t i = 0; i < d; ++i) {
      num *= checked_power(p, n - i) - 1;
      den *= checked_power(p, i + 1) - 1;
    }
    total += num / den;
  }
  return total;
}

}  // namespace quivercells
