#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "quiver.hpp"

namespace quivercells {

template <class F>
class Representation {
 public:
  Representation() = default;
  // Zero representation of the given dimension vector.
  Representation(Quiver q, F field, DimVector dims) : quiver_(std::move(q)), field_(std::move(field)), dims_(std::move(dims)) {
    check_dimvector(quiver_, dims_);
    for (const auto& a : quiver_.arrows())
      maps_.emplace_back(field_, static_cast<std::size_t>(dims_[a.tgt]), static_cast<std::size_t>(dims_[a.src]));
  }
  Representation(Quiver q, F field, DimVector dims, std::vector<Matrix<F>> maps)
      : quiver_(std::move(q)), field_(std::move(field)), dims_(std::move(dims)), maps_(std::move(maps)) {
    validate();
  }

  const Quiver& quiver() const { return quiver_; }
  const F& field() const { return field_; }
  const DimVector& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return static_cast<std::size_t>(dims_.at(v)); }
  long long total_dim() const { return quivercells::total_dim(dims_); }
  const Matrix<F>& map(std::size_t a) const { return maps_.at(a); }
  Matrix<F>& map(std::size_t a) { return maps_.at(a); }
  const std::vector<Matrix<F>>& maps() const { return maps_; }
  std::vector<Matrix<F>>& maps() { return maps_; }
  void set_map(std::size_t a, Matrix<F> m) {
    check_shape(a, m);
    maps_.at(a) = std::move(m);
  }

  void validate() const {
    check_dimvector(quiver_, dims_);
    if (maps_.size() != quiver_.num_arrows()) throw std::invalid_argument("one matrix per arrow required");
    for (std::size_t a = 0; a < maps_.size(); ++a) check_shape(a, maps_[a]);
  }

  friend bool operator==(const Representation& a, const Representation& b) {
    return a.quiver_ == b.quiver_ && a.dims_ == b.dims_ && a.maps_ == b.maps_;
  }

 private:
  void check_shape(std::size_t a, const Matrix<F>& m) const {
    const auto& ar = quiver_.arrow(a);
    if (m.rows() != static_cast<std::size_t>(dims_[ar.tgt]) || m.cols() != static_cast<std::size_t>(dims_[ar.src]))
      throw std::invalid_argument("matrix of arrow '" + ar.id + "' has the wrong shape");
  }

  Quiver quiver_;
  F field_{};
  DimVector dims_;
  std::vector<Matrix<F>> maps_;
};

// An element of R(N,M) = sum over arrows of Hom(N_s(a), M_t(a)).
template <class F>
struct RElement {
  DimVector source_dims;  // N
  DimVector target_dims;  // M
  std::vector<Matrix<F>> blocks;

  friend bool operator==(const RElement&, const RElement&) = default;
};

template <class F>
RElement<F> zero_relement(const Quiver& q, const F& field, const DimVector& source, const DimVector& target) {
  RElement<F> r{source, target, {}};
  for (const auto& a : q.arrows())
    r.blocks.emplace_back(field, static_cast<std::size_t>(target[a.tgt]), static_cast<std::size_t>(source[a.src]));
  return r;
}

template <class F>
RElement<F> zero_relement(const Representation<F>& n, const Representation<F>& m) {
  return zero_relement(n.quiver(), n.field(), n.dims(), m.dims());
}

template <class F>
void check_relement(const Quiver& q, const RElement<F>& f) {
  if (f.blocks.size() != q.num_arrows()) throw std::invalid_argument("R-element needs one block per arrow");
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    if (f.blocks[a].rows() != static_cast<std::size_t>(f.target_dims.at(ar.tgt)) ||
        f.blocks[a].cols() != static_cast<std::size_t>(f.source_dims.at(ar.src)))
      throw std::invalid_argument("R-element block for arrow '" + ar.id + "' has the wrong shape");
  }
}

inline std::size_t r_dimension(const Quiver& q, const DimVector& source, const DimVector& target) {
  std::size_t n = 0;
  for (const auto& a : q.arrows()) n += static_cast<std::size_t>(target[a.tgt] * source[a.src]);
  return n;
}

// Coordinates in (arrow, row, col) order.
template <class F>
Vec<F> flatten(const RElement<F>& f) {
  Vec<F> v;
  for (const auto& b : f.blocks) v.insert(v.end(), b.data().begin(), b.data().end());
  return v;
}

template <class F>
RElement<F> unflatten(const Quiver& q, const F& field, const DimVector& source, const DimVector& target, const Vec<F>& v) {
  RElement<F> r = zero_relement(q, field, source, target);
  std::size_t k = 0;
  for (auto& b : r.blocks)
    for (auto& x : b.data()) x = v.at(k++);
  if (k != v.size()) throw std::invalid_argument("coordinate vector has the wrong length");
  return r;
}

template <class F>
RElement<F> operator+(RElement<F> a, const RElement<F>& b) {
  if (a.source_dims != b.source_dims || a.target_dims != b.target_dims) throw std::invalid_argument("R-element context mismatch");
  for (std::size_t i = 0; i < a.blocks.size(); ++i) a.blocks[i] = a.blocks[i] + b.blocks[i];
  return a;
}

template <class F>
RElement<F> scaled(RElement<F> a, const typename F::value_type& c) {
  for (auto& b : a.blocks) b = b.scaled(c);
  return a;
}

template <class F>
bool is_zero(const RElement<F>& f) {
  for (const auto& b : f.blocks)
    if (!b.is_zero()) return false;
  return true;
}

// Standard basis vector of R(N,M) with a 1 at (arrow, row, col).
template <class F>
RElement<F> standard_relement(const Quiver& q, const F& field, const DimVector& source, const DimVector& target,
                              std::size_t arrow, std::size_t row, std::size_t col) {
  RElement<F> r = zero_relement(q, field, source, target);
  r.blocks.at(arrow)(row, col) = field.one();
  return r;
}

template <class F>
void check_compatible(const Representation<F>& a, const Representation<F>& b) {
  if (!(a.quiver() == b.quiver())) throw std::invalid_argument("representations live on different quivers");
  if (!(a.field() == b.field())) throw std::invalid_argument("representations live over different fields");
}

template <class F>
Representation<F> direct_sum(const Representation<F>& a, const Representation<F>& b) {
  check_compatible(a, b);
  DimVector d(a.dims());
  for (std::size_t v = 0; v < d.size(); ++v) d[v] += b.dims()[v];
  Representation<F> r(a.quiver(), a.field(), d);
  for (std::size_t x = 0; x < a.quiver().num_arrows(); ++x) {
    Matrix<F> m = r.map(x);
    m.set_block(0, 0, a.map(x));
    m.set_block(a.map(x).rows(), a.map(x).cols(), b.map(x));
    r.set_map(x, std::move(m));
  }
  return r;
}

// M(lambda) = M + lambda for lambda in R(M,M).
template <class F>
Representation<F> deform(const Representation<F>& m, const RElement<F>& lambda) {
  check_relement(m.quiver(), lambda);
  if (lambda.source_dims != m.dims() || lambda.target_dims != m.dims()) throw std::invalid_argument("deformation must lie in R(M,M)");
  Representation<F> r(m);
  for (std::size_t a = 0; a < m.quiver().num_arrows(); ++a) r.set_map(a, m.map(a) + lambda.blocks[a]);
  return r;
}

// B(tau, lambda, mu) with arrow matrices [[M_a + lambda_a, tau_a], [0, N_a + mu_a]].
template <class F>
Representation<F> middle_term(const Representation<F>& m, const Representation<F>& n, const RElement<F>& tau,
                              const RElement<F>& lambda, const RElement<F>& mu) {
  check_compatible(m, n);
  check_relement(m.quiver(), tau);
  if (tau.source_dims != n.dims() || tau.target_dims != m.dims()) throw std::invalid_argument("tau must lie in R(N,M)");
  Representation<F> ml = deform(m, lambda), nm = deform(n, mu);
  Representation<F> b = direct_sum(ml, nm);
  for (std::size_t a = 0; a < m.quiver().num_arrows(); ++a) {
    Matrix<F> x = b.map(a);
    x.set_block(0, ml.map(a).cols(), tau.blocks[a]);
    b.set_map(a, std::move(x));
  }
  return b;
}

template <class F>
Representation<F> middle_term(const Representation<F>& m, const Representation<F>& n, const RElement<F>& tau) {
  return middle_term(m, n, tau, zero_relement(m, m), zero_relement(n, n));
}

// Full-subquiver restriction; vertex and arrow ids are kept.
template <class F>
Representation<F> restrict(const Representation<F>& m, const std::vector<std::size_t>& sub) {
  const Quiver& q = m.quiver();
  std::vector<long> pos(q.num_vertices(), -1);
  Quiver r;
  DimVector d;
  for (auto v : sub) {
    if (v >= q.num_vertices()) throw std::out_of_range("restriction vertex out of range");
    if (pos[v] >= 0) continue;
    pos[v] = static_cast<long>(r.add_vertex(q.vertex_id(v)));
    d.push_back(m.dims()[v]);
  }
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    if (pos[ar.src] < 0 || pos[ar.tgt] < 0) continue;
    r.add_arrow(ar.id, static_cast<std::size_t>(pos[ar.src]), static_cast<std::size_t>(pos[ar.tgt]));
    maps.push_back(m.map(a));
  }
  return Representation<F>(r, m.field(), d, maps);
}

// Reduce a rational representation modulo p.
inline Representation<PrimeField> change_field(const Representation<Rationals>& m, const PrimeField& k) {
  std::vector<Matrix<PrimeField>> maps;
  for (const auto& x : m.maps()) {
    Matrix<PrimeField> y(k, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = k.reduce(x.data()[i]);
    maps.push_back(std::move(y));
  }
  return Representation<PrimeField>(m.quiver(), k, m.dims(), maps);
}

inline RElement<PrimeField> change_field(const RElement<Rationals>& f, const PrimeField& k) {
  RElement<PrimeField> r{f.source_dims, f.target_dims, {}};
  for (const auto& x : f.blocks) {
    Matrix<PrimeField> y(k, x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = k.reduce(x.data()[i]);
    r.blocks.push_back(std::move(y));
  }
  return r;
}

// Representation built from integer matrices given per arrow (row lists).
template <class F>
Representation<F> make_rep(const Quiver& q, const F& field, const DimVector& dims,
                           const std::vector<std::vector<std::vector<long long>>>& maps) {
  if (maps.size() != q.num_arrows()) throw std::invalid_argument("one matrix per arrow required");
  std::vector<Matrix<F>> ms;
  for (std::size_t a = 0; a < maps.size(); ++a) {
    const auto& ar = q.arrow(a);
    Matrix<F> m(field, static_cast<std::size_t>(dims[ar.tgt]), static_cast<std::size_t>(dims[ar.src]));
    if (m.size() == 0 && maps[a].empty()) {  // {} stands for any empty matrix
      ms.push_back(std::move(m));
      continue;
    }
    if (maps[a].size() != m.rows()) throw std::invalid_argument("wrong row count for arrow '" + ar.id + "'");
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (maps[a][i].size() != m.cols()) throw std::invalid_argument("wrong column count for arrow '" + ar.id + "'");
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = field.from_int(maps[a][i][j]);
    }
    ms.push_back(std::move(m));
  }
  return Representation<F>(q, field, dims, ms);
}

template <class F>
Representation<F> simple(const Quiver& q, const F& field, std::size_t v) {
  DimVector d(q.num_vertices(), 0);
  d.at(v) = 1;
  return Representation<F>(q, field, d);
}

// Coefficient quiver in a homogeneous basis given by invertible change-of-basis
// matrices (columns = basis vectors). Basis vector i at vertex v gets id "v:i".
template <class F>
LabeledQuiver coefficient_quiver(const Representation<F>& m, const std::vector<Matrix<F>>& basis) {
  const Quiver& q = m.quiver();
  if (basis.size() != q.num_vertices()) throw std::invalid_argument("one basis per vertex required");
  std::vector<Matrix<F>> inv;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (basis[v].rows() != m.dim(v) || basis[v].cols() != m.dim(v) || !invertible(basis[v]))
      throw std::invalid_argument("basis at vertex '" + q.vertex_id(v) + "' does not span");
    inv.push_back(inverse(basis[v]));
  }
  LabeledQuiver lq;
  lq.base = q;
  std::vector<std::size_t> first(q.num_vertices());
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    first[v] = lq.carrier.num_vertices();
    for (std::size_t i = 0; i < m.dim(v); ++i) {
      lq.carrier.add_vertex(q.vertex_id(v) + ":" + std::to_string(i + 1));
      lq.vertex_labels.push_back(v);
    }
  }
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    Matrix<F> c = inv[ar.tgt] * m.map(a) * basis[ar.src];
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) {
        if (m.field().is_zero(c(i, j))) continue;
        lq.carrier.add_arrow(ar.id + ":" + std::to_string(j + 1) + ">" + std::to_string(i + 1), first[ar.src] + j,
                             first[ar.tgt] + i);
        lq.arrow_labels.push_back(a);
      }
  }
  lq.validate();
  return lq;
}

template <class F>
LabeledQuiver coefficient_quiver(const Representation<F>& m) {
  std::vector<Matrix<F>> basis;
  for (std::size_t v = 0; v < m.quiver().num_vertices(); ++v) basis.push_back(Matrix<F>::identity(m.field(), m.dim(v)));
  return coefficient_quiver(m, basis);
}

}  // namespace quivercells
