#pragma once

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "representation.hpp"

namespace quivercells {

// A vertex (q, chi) of the universal abelian cover, chi indexed by base arrows.
struct CoverVertex {
  std::size_t base = 0;
  std::vector<long long> chi;
  auto operator<=>(const CoverVertex&) const = default;
};

inline std::string cover_vertex_id(const Quiver& base, const CoverVertex& v) {
  std::string s = base.vertex_id(v.base) + "@(";
  for (std::size_t i = 0; i < v.chi.size(); ++i) s += (i ? "," : "") + std::to_string(v.chi[i]);
  return s + ")";
}

struct CoverArrow {
  std::size_t base_arrow = 0;
  std::size_t src = 0;  // window vertex index
  std::size_t tgt = 0;
};

// A finite full subquiver of the cover. Vertices sorted by (base vertex, chi);
// arrows sorted by (base arrow, source chi).
struct CoverWindow {
  Quiver base;
  long long radius = 0;
  std::vector<CoverVertex> vertices;
  std::vector<CoverArrow> arrows;
  Quiver quiver;  // carrier quiver, one vertex/arrow per entry above

  std::optional<std::size_t> find(const CoverVertex& v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || !(*it == v)) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
  }
};

// Neighbours in the (undirected) cover graph.
inline std::vector<CoverVertex> cover_neighbours(const Quiver& q, const CoverVertex& v) {
  std::vector<CoverVertex> out;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    if (ar.src == v.base) {
      CoverVertex w{ar.tgt, v.chi};
      ++w.chi[a];
      out.push_back(std::move(w));
    }
    if (ar.tgt == v.base) {
      CoverVertex w{ar.src, v.chi};
      --w.chi[a];
      out.push_back(std::move(w));
    }
  }
  return out;
}

// Window on an explicit vertex set, with every induced arrow.
inline CoverWindow induced_window(const Quiver& q, std::vector<CoverVertex> vertices, long long radius) {
  CoverWindow w;
  w.base = q;
  w.radius = radius;
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  w.vertices = std::move(vertices);
  for (const auto& v : w.vertices) {
    if (v.base >= q.num_vertices() || v.chi.size() != q.num_arrows()) throw std::invalid_argument("cover vertex does not fit the base quiver");
    w.quiver.add_vertex(cover_vertex_id(q, v));
  }
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
      const auto& v = w.vertices[i];
      if (v.base != ar.src) continue;
      CoverVertex t{ar.tgt, v.chi};
      ++t.chi[a];
      if (auto j = w.find(t)) {
        w.arrows.push_back({a, i, *j});
        w.quiver.add_arrow(ar.id + "@" + w.quiver.vertex_id(i), i, *j);
      }
    }
  }
  return w;
}

// All cover vertices within graph distance `radius` of the chi = 0 shell.
inline CoverWindow cover_window(const Quiver& q, long long radius) {
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  std::map<CoverVertex, long long> dist;
  std::deque<CoverVertex> queue;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    CoverVertex c{v, std::vector<long long>(q.num_arrows(), 0)};
    dist[c] = 0;
    queue.push_back(c);
  }
  while (!queue.empty()) {
    CoverVertex v = queue.front();
    queue.pop_front();
    long long d = dist[v];
    if (d == radius) continue;
    for (auto& w : cover_neighbours(q, v))
      if (dist.emplace(w, d + 1).second) queue.push_back(w);
  }
  std::vector<CoverVertex> vs;
  for (auto& [v, d] : dist) vs.push_back(v);
  return induced_window(q, std::move(vs), radius);
}

template <class F>
struct CoverRepresentation {
  CoverWindow window;
  Representation<F> rep;          // over window.quiver
  std::vector<long long> gamma;   // one integer per base arrow
  // Window vertex indices in the order their basis vectors appear after pushdown;
  // empty means window order.
  std::vector<std::size_t> order;
};

inline long long cover_weight(const std::vector<long long>& gamma, const CoverVertex& v) {
  long long w = 0;
  for (std::size_t a = 0; a < gamma.size(); ++a) w += gamma[a] * v.chi.at(a);
  return w;
}

inline std::vector<std::size_t> pushdown_order(const CoverWindow& w, const std::vector<std::size_t>& order) {
  if (order.empty()) {
    std::vector<std::size_t> r(w.vertices.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = i;
    return r;
  }
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != i || sorted.size() != w.vertices.size()) throw std::invalid_argument("cover basis order is not a permutation of the window");
  return order;
}

// Pushdown F_Q: the basis at base vertex q runs through the fibres (q, chi) in the given order.
template <class F>
Representation<F> pushdown(const CoverWindow& w, const Representation<F>& rep, const std::vector<std::size_t>& order = {}) {
  const Quiver& q = w.base;
  DimVector dims(q.num_vertices(), 0);
  std::vector<std::size_t> offset(w.vertices.size());
  for (auto i : pushdown_order(w, order)) {
    offset[i] = static_cast<std::size_t>(dims[w.vertices[i].base]);
    dims[w.vertices[i].base] += rep.dims()[i];
  }
  Representation<F> r(q, rep.field(), dims);
  for (std::size_t e = 0; e < w.arrows.size(); ++e) {
    const auto& ca = w.arrows[e];
    Matrix<F> m = r.map(ca.base_arrow);
    m.set_block(offset[ca.tgt], offset[ca.src], rep.map(e));
    r.set_map(ca.base_arrow, std::move(m));
  }
  return r;
}

template <class F>
Representation<F> pushdown(const CoverRepresentation<F>& cr) {
  return pushdown(cr.window, cr.rep, cr.order);
}

// Weight of every pushed-down basis vector, per base vertex.
template <class F>
std::vector<std::vector<long long>> weights_from_cover(const CoverRepresentation<F>& cr) {
  std::vector<std::vector<long long>> out(cr.window.base.num_vertices());
  for (auto i : pushdown_order(cr.window, cr.order)) {
    const auto& v = cr.window.vertices[i];
    for (long long k = 0; k < cr.rep.dims()[i]; ++k) out[v.base].push_back(cover_weight(cr.gamma, v));
  }
  return out;
}

// Cover dimension vector: sorted (vertex, positive dim) pairs.
using CoverDimVector = std::vector<std::pair<CoverVertex, long long>>;

struct CompatibleClasses {
  std::vector<CoverDimVector> classes;  // connected supports, canonical translates inside the window
  std::size_t outside_window = 0;       // classes whose canonical translate leaves the window
};

inline CoverDimVector translate(const CoverDimVector& a, const std::vector<long long>& eta) {
  CoverDimVector r = a;
  for (auto& [v, d] : r)
    for (std::size_t i = 0; i < eta.size(); ++i) v.chi[i] += eta[i];
  std::sort(r.begin(), r.end());
  return r;
}

// Connected cover dimension vectors lifting alpha, one per translation class. The
// canonical translate puts the least support vertex at chi = 0.
inline CompatibleClasses compatible_dimvectors(const CoverWindow& w, const DimVector& alpha) {
  const Quiver& q = w.base;
  check_dimvector(q, alpha);
  CompatibleClasses out;
  if (total_dim(alpha) == 0) {
    out.classes.push_back({});
    return out;
  }
  std::size_t need_vertices = 0;
  for (auto x : alpha) need_vertices += x > 0;
  std::set<std::vector<CoverVertex>> seen;
  std::vector<std::vector<CoverVertex>> supports;
  for (std::size_t v0 = 0; v0 < q.num_vertices(); ++v0) {
    if (alpha[v0] == 0) continue;
    CoverVertex start{v0, std::vector<long long>(q.num_arrows(), 0)};
    std::vector<std::vector<CoverVertex>> stack{{start}};
    seen.insert({start});
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      std::vector<long long> count(q.num_vertices(), 0);
      for (const auto& x : s) ++count[x.base];
      std::size_t covered = 0;
      for (std::size_t v = 0; v < q.num_vertices(); ++v) covered += count[v] > 0;
      if (covered == need_vertices) supports.push_back(s);
      for (const auto& x : s)
        for (auto& y : cover_neighbours(q, x)) {
          if (y < start || count[y.base] >= alpha[y.base]) continue;
          if (std::binary_search(s.begin(), s.end(), y)) continue;
          auto t = s;
          t.insert(std::upper_bound(t.begin(), t.end(), y), y);
          if (seen.insert(t).second) stack.push_back(std::move(t));
        }
    }
  }
  std::sort(supports.begin(), supports.end());
  for (const auto& s : supports) {
    // distribute alpha_v over the fibre vertices of s, each at least 1
    std::vector<std::vector<std::size_t>> fibre(q.num_vertices());
    for (std::size_t i = 0; i < s.size(); ++i) fibre[s[i].base].push_back(i);
    std::vector<long long> dims(s.size(), 1);
    std::function<void(std::size_t)> rec = [&](std::size_t v) {
      if (v == q.num_vertices()) {
        CoverDimVector a;
        for (std::size_t i = 0; i < s.size(); ++i) a.push_back({s[i], dims[i]});
        bool inside = std::all_of(a.begin(), a.end(), [&](const auto& p) { return w.find(p.first).has_value(); });
        if (inside) out.classes.push_back(std::move(a));
        else ++out.outside_window;
        return;
      }
      const auto& f = fibre[v];
      if (f.empty()) return rec(v + 1);
      long long extra = alpha[v] - static_cast<long long>(f.size());
      // compositions of `extra` into |f| nonnegative parts, lexicographically decreasing on the first part
      std::function<void(std::size_t, long long)> part = [&](std::size_t i, long long left) {
        if (i + 1 == f.size()) {
          dims[f[i]] = 1 + left;
          rec(v + 1);
          return;
        }
        for (long long x = left; x >= 0; --x) {
          dims[f[i]] = 1 + x;
          part(i + 1, left - x);
        }
      };
      part(0, extra);
    };
    rec(0);
  }
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

// Euler form of the cover quiver restricted to the support of a.
inline long long cover_euler_form(const Quiver& q, const CoverDimVector& a) {
  long long s = 0;
  std::map<CoverVertex, long long> d(a.begin(), a.end());
  for (const auto& [v, x] : a) {
    s += x * x;
    for (std::size_t e = 0; e < q.num_arrows(); ++e) {
      const auto& ar = q.arrow(e);
      if (ar.src != v.base) continue;
      CoverVertex t{ar.tgt, v.chi};
      ++t.chi[e];
      auto it = d.find(t);
      if (it != d.end()) s -= x * it->second;
    }
  }
  return s;
}

}  // namespace quivercells
