#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "enumerate.hpp"
#include "representation.hpp"

namespace quivercells {

inline std::uint64_t rep_space_dim(const Quiver& q, const DimVector& alpha) {
  std::uint64_t n = 0;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    n += static_cast<std::uint64_t>(alpha[ar.src] * alpha[ar.tgt]);
  }
  return n;
}

// Points of R_alpha(F_p) with index in [begin, end), in index order. Entry order
// is arrow, then row-major within each matrix, least significant first.
template <class Fn>
void for_each_point_range(const Quiver& q, const PrimeField& k, const DimVector& alpha, std::uint64_t begin, std::uint64_t end,
                          Fn&& fn) {
  check_dimvector(q, alpha);
  Representation<PrimeField> m(q, k, alpha);
  std::vector<std::uint32_t> digits(rep_space_dim(q, alpha));
  decode_point(begin, k.order(), digits);
  auto load = [&] {
    std::size_t pos = 0;
    for (auto& mat : m.maps())
      for (auto& x : mat.data()) x = digits[pos++];
  };
  load();
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    if (!fn(static_cast<const Representation<PrimeField>&>(m))) return;
    std::size_t i = 0;
    for (; i < digits.size(); ++i) {
      if (++digits[i] < k.order()) break;
      digits[i] = 0;
    }
    load();
  }
}

inline std::uint64_t point_count(const Quiver& q, const PrimeField& k, const DimVector& alpha, const Budget& budget,
                                 const std::string& what) {
  auto n = rep_space_dim(q, alpha);
  require_budget(k.order(), n, budget, what);
  return checked_power(k.order(), n);
}

template <class Fn>
void for_each_point(const Quiver& q, const PrimeField& k, const DimVector& alpha, Fn&& fn, const Budget& budget = {}) {
  for_each_point_range(q, k, alpha, 0, point_count(q, k, alpha, budget, "for_each_point"), std::forward<Fn>(fn));
}

// Splits the points of R_alpha(F_p) into contiguous index ranges, one thread each.
// Every shard starts from a copy of init; partial results are merged in shard
// order, so an associative, commutative merge gives the same answer for any split.
template <class Acc, class Visit, class Merge>
Acc accumulate_points(const Quiver& q, const PrimeField& k, const DimVector& alpha, unsigned shards, Acc init, Visit visit,
                      Merge merge, const Budget& budget = {}) {
  std::uint64_t total = point_count(q, k, alpha, budget, "point enumeration");
  if (shards == 0) shards = 1;
  if (total < shards) shards = static_cast<unsigned>(total == 0 ? 1 : total);
  std::vector<Acc> parts(shards, init);
  std::vector<std::exception_ptr> errors(shards);
  auto run = [&](unsigned s) {
    try {
      std::uint64_t b = total / shards * s + std::min<std::uint64_t>(s, total % shards);
      std::uint64_t e = b + total / shards + (s < total % shards ? 1 : 0);
      for_each_point_range(q, k, alpha, b, e, [&](const Representation<PrimeField>& m) {
        visit(parts[s], m);
        return true;
      });
    } catch (...) {
      errors[s] = std::current_exception();
    }
  };
  if (shards == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned s = 0; s < shards; ++s) pool.emplace_back(run, s);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Acc out = std::move(parts[0]);
  for (unsigned s = 1; s < shards; ++s) merge(out, std::move(parts[s]));
  return out;
}

// |GL_alpha(F_p)| = prod_v prod_{i<d_v} (p^{d_v} - p^i).
inline mpz_class gl_order(std::uint32_t p, const DimVector& alpha) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, long long>, mpz_class> memo;
  mpz_class r = 1;
  for (auto d : alpha) {
    mpz_class g;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find({p, d});
      if (it != memo.end()) g = it->second;
    }
    if (g == 0) {
      g = 1;
      mpz_class pd, pi = 1;
      mpz_ui_pow_ui(pd.get_mpz_t(), p, static_cast<unsigned long>(d));
      for (long long i = 0; i < d; ++i) {
        g *= pd - pi;
        pi *= p;
      }
      std::lock_guard<std::mutex> lock(mu);
      memo[{p, d}] = g;
    }
    r *= g;
  }
  return r;
}

}  // namespace quivercells
