#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cover.hpp"
#include "homalg.hpp"
#include "stability.hpp"

namespace quivercells {

// Entry (row, col) of the matrix of a base arrow.
struct MatrixPosition {
  std::size_t arrow = 0, row = 0, col = 0;
  auto operator<=>(const MatrixPosition&) const = default;
};

// Entry (row, col) of the unipotent factor at a vertex.
struct UnipotentPosition {
  std::size_t vertex = 0, row = 0, col = 0;
  auto operator<=>(const UnipotentPosition&) const = default;
};

class NotGeneric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoCanonicalSection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
struct AttractorData {
  Representation<F> lift;                           // T, pushed down
  std::vector<std::vector<long long>> weights;      // per base vertex, per basis vector
  std::vector<MatrixPosition> v_t;                  // free coordinates of Att(T) - T
  std::vector<UnipotentPosition> u_psi;             // free entries of U_psi
  std::optional<std::vector<MatrixPosition>> section;
  std::vector<long long> gamma;

  std::size_t u_psi_dim() const { return u_psi.size(); }
  long long cell_dim() const { return static_cast<long long>(v_t.size()) - static_cast<long long>(u_psi.size()); }
};

// Cover vertex of every pushed-down basis vector, per base vertex.
template <class F>
std::vector<std::vector<std::size_t>> pushdown_fibres(const CoverRepresentation<F>& cr) {
  std::vector<std::vector<std::size_t>> out(cr.window.base.num_vertices());
  for (auto i : pushdown_order(cr.window, cr.order)) {
    const auto& v = cr.window.vertices[i];
    for (long long k = 0; k < cr.rep.dims()[i]; ++k) out[v.base].push_back(i);
  }
  return out;
}

// V_T and U_psi read off from the weights. Equal weights that the cover does not
// account for mean gamma is not general enough; that raises NotGeneric.
template <class F>
AttractorData<F> attracting_space(const CoverRepresentation<F>& cr) {
  const Quiver& q = cr.window.base;
  if (cr.gamma.size() != q.num_arrows()) throw std::invalid_argument("gamma needs one entry per arrow");
  AttractorData<F> ad{pushdown(cr), weights_from_cover(cr), {}, {}, std::nullopt, cr.gamma};
  auto fib = pushdown_fibres(cr);
  const auto& w = ad.weights;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    for (std::size_t i = 0; i < w[ar.tgt].size(); ++i)
      for (std::size_t j = 0; j < w[ar.src].size(); ++j) {
        long long diff = w[ar.tgt][i] - w[ar.src][j];
        if (diff > cr.gamma[a]) {
          ad.v_t.push_back({a, i, j});
        } else if (diff == cr.gamma[a]) {
          CoverVertex s = cr.window.vertices[fib[ar.src][j]];
          s.base = ar.tgt;
          ++s.chi[a];
          if (!(s == cr.window.vertices[fib[ar.tgt][i]]))
            throw NotGeneric("gamma is not general: arrow " + ar.id + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") has weight difference gamma off the cover; choose another gamma");
        }
      }
  }
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    for (std::size_t i = 0; i < w[v].size(); ++i)
      for (std::size_t j = 0; j < w[v].size(); ++j) {
        if (i == j) continue;
        if (w[v][i] > w[v][j]) ad.u_psi.push_back({v, i, j});
        else if (w[v][i] == w[v][j] && fib[v][i] != fib[v][j])
          throw NotGeneric("gamma is not general: two fibres over vertex " + q.vertex_id(v) + " share weight " +
                           std::to_string(w[v][i]) + "; choose another gamma");
      }
  return ad;
}

// Linearised U_psi action at T, one row per generator, one column per V_T entry.
template <class F>
Matrix<F> unipotent_derivative(const AttractorData<F>& ad) {
  const Representation<F>& t = ad.lift;
  const Quiver& q = t.quiver();
  const F& k = t.field();
  std::map<MatrixPosition, std::size_t> col;
  for (std::size_t c = 0; c < ad.v_t.size(); ++c) col[ad.v_t[c]] = c;
  Matrix<F> d(k, ad.u_psi.size(), ad.v_t.size());
  auto put = [&](std::size_t r, MatrixPosition p, const typename F::value_type& x) {
    if (k.is_zero(x)) return;
    auto it = col.find(p);
    if (it == col.end()) throw std::logic_error("unipotent derivative leaves V_T");
    d(r, it->second) = k.add(d(r, it->second), x);
  };
  for (std::size_t r = 0; r < ad.u_psi.size(); ++r) {
    const auto& u = ad.u_psi[r];
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& ar = q.arrow(a);
      const auto& m = t.map(a);
      if (ar.tgt == u.vertex)  // E_ij T_a: row j of T_a moves to row i
        for (std::size_t c = 0; c < m.cols(); ++c) put(r, {a, u.row, c}, m(u.col, c));
      if (ar.src == u.vertex)  // -T_a E_ij: column i of T_a moves to column j
        for (std::size_t c = 0; c < m.rows(); ++c) put(r, {a, c, u.col}, k.neg(m(c, u.row)));
    }
  }
  return d;
}

// Section U_T of Att(T) -> Att(T)/U_psi. Columns are scanned by arrow descending,
// then (row, col) ascending; each pivot is a coordinate the group can clear.
template <class F>
std::vector<MatrixPosition> cell_section(AttractorData<F>& ad) {
  std::vector<std::size_t> perm(ad.v_t.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    const auto &a = ad.v_t[x], &b = ad.v_t[y];
    if (a.arrow != b.arrow) return a.arrow > b.arrow;
    return std::pair(a.row, a.col) < std::pair(b.row, b.col);
  });
  auto d = unipotent_derivative(ad);
  const F& k = ad.lift.field();
  Matrix<F> p(k, d.rows(), d.cols());
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) p(r, c) = d(r, perm[c]);
  auto e = rref(p);
  if (e.pivots.size() != ad.u_psi.size())
    throw NoCanonicalSection("no canonical section: U_psi moves only " + std::to_string(e.pivots.size()) + " of " +
                             std::to_string(ad.u_psi.size()) + " independent directions at T");
  std::vector<bool> cleared(ad.v_t.size(), false);
  for (auto c : e.pivots) cleared[perm[c]] = true;
  std::vector<MatrixPosition> s;
  for (std::size_t c = 0; c < ad.v_t.size(); ++c)
    if (!cleared[c]) s.push_back(ad.v_t[c]);
  ad.section = s;
  return s;
}

// T + sum coeffs[i] E_{positions[i]}.
template <class F>
Representation<F> section_point(const Representation<F>& t, const std::vector<MatrixPosition>& positions,
                                const std::vector<typename F::value_type>& coeffs) {
  if (coeffs.size() != positions.size()) throw std::invalid_argument("one coefficient per section coordinate expected");
  Representation<F> r = t;
  const F& k = t.field();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto& x = r.map(positions[i].arrow)(positions[i].row, positions[i].col);
    x = k.add(x, coeffs[i]);
  }
  return r;
}

// The section as R(T,T) basis vectors.
template <class F>
std::vector<RElement<F>> section_basis(const AttractorData<F>& ad) {
  if (!ad.section) throw std::logic_error("section not computed");
  std::vector<RElement<F>> out;
  const auto& t = ad.lift;
  for (const auto& p : *ad.section) out.push_back(standard_relement(t.quiver(), t.field(), t.dims(), t.dims(), p.arrow, p.row, p.col));
  return out;
}

struct SectionCheck {
  std::uint64_t points = 0;
  bool all_stable = true;
  bool all_indecomposable = true;
  bool separating = true;
  std::vector<std::vector<std::uint32_t>> witness;  // offending coefficient tuples
};

// Over F_p: every point of T + U_T is indecomposable and theta-stable, and no two
// are isomorphic.
inline SectionCheck verify_section(const Representation<PrimeField>& t, const std::vector<MatrixPosition>& section,
                                   const std::optional<StabilityWeights>& theta, const Budget& budget = {}) {
  const PrimeField& k = t.field();
  require_budget(k.order(), section.size(), budget, "verify_section");
  SectionCheck r;
  std::vector<Representation<PrimeField>> pts;
  std::vector<std::vector<std::uint32_t>> coords;
  std::uint64_t n = checked_power(k.order(), section.size());
  std::vector<std::uint32_t> c(section.size());
  for (std::uint64_t i = 0; i < n; ++i) {
    decode_point(i, k.order(), c);
    auto m = section_point(t, section, Vec<PrimeField>(c.begin(), c.end()));
    if (!is_indecomposable(m, budget)) {
      r.all_indecomposable = false;
      r.witness.push_back(c);
    }
    if (theta && is_stable(m, *theta, budget) != Stability::stable) {
      r.all_stable = false;
      r.witness.push_back(c);
    }
    pts.push_back(std::move(m));
    coords.push_back(c);
  }
  r.points = n;
  for (std::size_t i = 0; i < pts.size() && r.separating; ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (is_isomorphic(pts[i], pts[j], budget)) {
        r.separating = false;
        r.witness.push_back(coords[i]);
        r.witness.push_back(coords[j]);
        break;
      }
  return r;
}

// Stability of sampled points T + lambda, lambda in span(V_T), over F_p.
template <class Rng>
bool sample_attractor_stability(const Representation<PrimeField>& t, const std::vector<MatrixPosition>& v_t,
                                const StabilityWeights& theta, std::size_t samples, Rng& rng, const Budget& budget = {}) {
  const PrimeField& k = t.field();
  Vec<PrimeField> c(v_t.size());
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& x : c) x = k.element(rng());
    if (is_stable(section_point(t, v_t, c), theta, budget) != Stability::stable) return false;
  }
  return true;
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace detail

// Tree module of an exceptional cover dimension vector on a tree support: 0/1
// entries whose coefficient quiver is a tree. Candidates are tried by number of
// entries per base arrow, then by position; the first Schurian one is returned.
inline std::optional<Representation<Rationals>> tree_representative(const CoverWindow& w, const DimVector& dims,
                                                                    const Budget& budget = {}) {
  Rationals q;
  std::vector<std::size_t> offset(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) offset[i + 1] = offset[i] + static_cast<std::size_t>(dims[i]);
  std::size_t nodes = offset.back();
  if (nodes == 0) return Representation<Rationals>(w.quiver, q, dims);
  struct Pos {
    std::size_t arrow, row, col;
  };
  std::vector<Pos> pos;
  for (std::size_t e = 0; e < w.arrows.size(); ++e)
    for (long long r = 0; r < dims[w.arrows[e].tgt]; ++r)
      for (long long c = 0; c < dims[w.arrows[e].src]; ++c) pos.push_back({e, static_cast<std::size_t>(r), static_cast<std::size_t>(c)});
  std::size_t need = nodes - 1;
  if (pos.size() < need) return std::nullopt;
  std::size_t nbase = w.base.num_arrows();
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> cands;  // (counts, chosen)
  std::vector<std::size_t> chosen(need);
  std::iota(chosen.begin(), chosen.end(), 0);
  std::uint64_t steps = 0;
  while (true) {
    if (++steps > budget.limit) throw Undecided("tree representative search exceeds budget");
    detail::UnionFind uf(nodes);
    bool tree = true;
    for (auto i : chosen) {
      const auto& p = pos[i];
      if (!uf.unite(offset[w.arrows[p.arrow].src] + p.col, offset[w.arrows[p.arrow].tgt] + p.row)) {
        tree = false;
        break;
      }
    }
    if (tree) {
      std::vector<std::size_t> counts(nbase, 0);
      for (auto i : chosen) ++counts[w.arrows[pos[i].arrow].base_arrow];
      cands.push_back({counts, chosen});
    }
    std::size_t i = need;
    while (i > 0 && chosen[i - 1] == pos.size() - need + i - 1) --i;
    if (i == 0) break;
    ++chosen[i - 1];
    for (std::size_t j = i; j < need; ++j) chosen[j] = chosen[j - 1] + 1;
  }
  std::sort(cands.begin(), cands.end());
  for (const auto& [counts, ch] : cands) {
    Representation<Rationals> r(w.quiver, q, dims);
    for (auto i : ch) r.map(pos[i].arrow)(pos[i].row, pos[i].col) = 1;
    if (is_schurian(r)) return r;
  }
  return std::nullopt;
}

struct FixedPointOptions {
  long long radius = 4;
  std::uint32_t prime = 101;  // stability of the cover representative is checked over F_p
  Budget budget{};
};

struct FixedPointReport {
  std::vector<CoverRepresentation<Rationals>> points;
  std::vector<CoverDimVector> non_tree;      // exceptional but unsupported
  std::vector<CoverDimVector> not_stable;    // exceptional tree supports whose module is not stable
  std::size_t outside_window = 0;
};

inline bool support_is_tree(const CoverWindow& w) { return w.arrows.size() + 1 == w.vertices.size(); }

inline StabilityWeights lift_theta(const CoverWindow& w, const StabilityWeights& theta) {
  StabilityWeights t;
  for (const auto& v : w.vertices) t.push_back(theta.at(v.base));
  return t;
}

// Torus fixed points of the theta-stable moduli of alpha, as exceptional cover
// representations found inside the window of the given radius.
inline FixedPointReport fixed_points(const Quiver& q, const DimVector& alpha, const StabilityWeights& theta,
                                     const std::vector<long long>& gamma, const FixedPointOptions& opt = {}) {
  if (theta.size() != q.num_vertices()) throw std::invalid_argument("theta needs one entry per vertex");
  if (gamma.size() != q.num_arrows()) throw std::invalid_argument("gamma needs one entry per arrow");
  FixedPointReport out;
  if (total_dim(alpha) == 0) return out;
  auto window = cover_window(q, opt.radius);
  auto classes = compatible_dimvectors(window, alpha);
  out.outside_window = classes.outside_window;
  PrimeField kp(opt.prime);
  for (const auto& c : classes.classes) {
    if (cover_euler_form(q, c) != 1) continue;
    std::vector<CoverVertex> vs;
    for (const auto& [v, d] : c) vs.push_back(v);
    auto sw = induced_window(q, vs, opt.radius);
    if (!support_is_tree(sw)) {
      out.non_tree.push_back(c);
      continue;
    }
    DimVector dims;
    for (const auto& [v, d] : c) dims.push_back(d);
    auto rep = tree_representative(sw, dims, opt.budget);
    if (!rep) {
      out.non_tree.push_back(c);
      continue;
    }
    if (is_stable(change_field(*rep, kp), lift_theta(sw, theta), opt.budget) != Stability::stable) {
      out.not_stable.push_back(c);
      continue;
    }
    out.points.push_back({sw, std::move(*rep), gamma, {}});
  }
  return out;
}

// sum q^(2 dim) as coefficients of q^0, q^1, ...
inline std::vector<long long> poincare(const std::vector<long long>& cell_dims) {
  std::vector<long long> p;
  for (auto d : cell_dims) {
    if (d < 0) throw std::invalid_argument("negative cell dimension");
    auto i = static_cast<std::size_t>(2 * d);
    if (p.size() <= i) p.resize(i + 1, 0);
    ++p[i];
  }
  if (p.empty()) p.push_back(0);
  return p;
}

}  // namespace quivercells
