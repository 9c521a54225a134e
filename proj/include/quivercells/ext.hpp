#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "representation.hpp"

namespace quivercells {

// Per-vertex matrices phi_q : source_q -> target_q.
template <class F>
struct Morphism {
  Representation<F> source;
  Representation<F> target;
  std::vector<Matrix<F>> components;
};

template <class F>
bool is_morphism(const Representation<F>& s, const Representation<F>& t, const std::vector<Matrix<F>>& phi) {
  const Quiver& q = s.quiver();
  if (phi.size() != q.num_vertices()) return false;
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    if (phi[v].rows() != t.dim(v) || phi[v].cols() != s.dim(v)) return false;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    if (!(phi[ar.tgt] * s.map(a) == t.map(a) * phi[ar.src])) return false;
  }
  return true;
}

template <class F>
Morphism<F> make_morphism(const Representation<F>& s, const Representation<F>& t, std::vector<Matrix<F>> phi) {
  if (!is_morphism(s, t, phi)) throw std::invalid_argument("components do not define a morphism");
  return {s, t, std::move(phi)};
}

template <class F>
Morphism<F> compose(const Morphism<F>& g, const Morphism<F>& f) {  // g after f
  std::vector<Matrix<F>> c;
  for (std::size_t v = 0; v < f.components.size(); ++v) c.push_back(g.components[v] * f.components[v]);
  return {f.source, g.target, std::move(c)};
}

template <class F>
Morphism<F> identity_morphism(const Representation<F>& m) {
  std::vector<Matrix<F>> c;
  for (std::size_t v = 0; v < m.quiver().num_vertices(); ++v) c.push_back(Matrix<F>::identity(m.field(), m.dim(v)));
  return {m, m, std::move(c)};
}

// Canonical inclusion M -> B and projection B -> N for B = M + N blockwise.
template <class F>
Morphism<F> block_inclusion(const Representation<F>& m, const Representation<F>& b) {
  std::vector<Matrix<F>> c;
  for (std::size_t v = 0; v < m.quiver().num_vertices(); ++v) {
    Matrix<F> x(m.field(), b.dim(v), m.dim(v));
    for (std::size_t i = 0; i < m.dim(v); ++i) x(i, i) = m.field().one();
    c.push_back(std::move(x));
  }
  return {m, b, std::move(c)};
}

template <class F>
Morphism<F> block_projection(const Representation<F>& b, const Representation<F>& n) {
  std::vector<Matrix<F>> c;
  for (std::size_t v = 0; v < n.quiver().num_vertices(); ++v) {
    Matrix<F> x(n.field(), n.dim(v), b.dim(v));
    std::size_t off = b.dim(v) - n.dim(v);
    for (std::size_t i = 0; i < n.dim(v); ++i) x(i, off + i) = n.field().one();
    c.push_back(std::move(x));
  }
  return {b, n, std::move(c)};
}

// d_{N,M}: (f_q) -> (f_t(a) N_a - M_a f_s(a)), with the reduction realizing pi_{N,M}.
template <class F>
class ExtPresentation {
 public:
  ExtPresentation(Representation<F> n, Representation<F> m)
      : source_(std::move(n)), target_(std::move(m)), image_(source_.field(), 0) {
    check_compatible(source_, target_);
    const Quiver& q = source_.quiver();
    const F& k = source_.field();
    std::size_t cols = 0;
    for (std::size_t v = 0; v < q.num_vertices(); ++v) {
      col_offset_.push_back(cols);
      cols += target_.dim(v) * source_.dim(v);
    }
    std::size_t rows = 0;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      row_offset_.push_back(rows);
      const auto& ar = q.arrow(a);
      rows += target_.dim(ar.tgt) * source_.dim(ar.src);
    }
    d_ = Matrix<F>(k, rows, cols);
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& ar = q.arrow(a);
      std::size_t mt = target_.dim(ar.tgt), ns = source_.dim(ar.src), nt = source_.dim(ar.tgt), ms = target_.dim(ar.src);
      const auto& na = source_.map(a);
      const auto& ma = target_.map(a);
      for (std::size_t i = 0; i < mt; ++i)
        for (std::size_t j = 0; j < ns; ++j) {
          std::size_t r = row_offset_[a] + i * ns + j;
          for (std::size_t l = 0; l < nt; ++l) {  // f_t(i,l) N_a(l,j)
            std::size_t c = col_offset_[ar.tgt] + i * nt + l;
            d_(r, c) = k.add(d_(r, c), na(l, j));
          }
          for (std::size_t l = 0; l < ms; ++l) {  // - M_a(i,l) f_s(l,j)
            std::size_t c = col_offset_[ar.src] + l * ns + j;
            d_(r, c) = k.sub(d_(r, c), ma(i, l));
          }
        }
    }
    image_ = RowSpace<F>(k, rows);
    auto dt = d_.transpose();
    for (std::size_t c = 0; c < cols; ++c) image_.insert(dt.row(c));
    kernel_ = kernel_basis(d_);
    std::vector<bool> piv(rows, false);
    for (auto p : image_.pivots()) piv[p] = true;
    for (std::size_t r = 0; r < rows; ++r)
      if (!piv[r]) ext_coords_.push_back(r);
  }

  const Representation<F>& source() const { return source_; }
  const Representation<F>& target() const { return target_; }
  const Matrix<F>& d_matrix() const { return d_; }
  const RowSpace<F>& image_echelon() const { return image_; }
  std::size_t hom_dim() const { return kernel_.size(); }
  std::size_t ext_dim() const { return d_.rows() - image_.dim(); }
  std::size_t r_dim() const { return d_.rows(); }
  const std::vector<Vec<F>>& kernel() const { return kernel_; }
  // Non-pivot coordinates of R(N,M); they give coordinates on Ext(N,M).
  const std::vector<std::size_t>& ext_coordinates() const { return ext_coords_; }

  std::vector<Matrix<F>> unflatten_hom(const Vec<F>& v) const {
    std::vector<Matrix<F>> phi;
    const Quiver& q = source_.quiver();
    for (std::size_t v2 = 0; v2 < q.num_vertices(); ++v2) {
      Matrix<F> x(source_.field(), target_.dim(v2), source_.dim(v2));
      for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = v[col_offset_[v2] + i];
      phi.push_back(std::move(x));
    }
    return phi;
  }
  Vec<F> flatten_hom(const std::vector<Matrix<F>>& phi) const {
    Vec<F> v;
    for (const auto& x : phi) v.insert(v.end(), x.data().begin(), x.data().end());
    if (v.size() != d_.cols()) throw std::invalid_argument("morphism has the wrong shape");
    return v;
  }
  std::vector<Morphism<F>> hom_basis() const {
    std::vector<Morphism<F>> r;
    for (const auto& v : kernel_) r.push_back({source_, target_, unflatten_hom(v)});
    return r;
  }

  RElement<F> relement(const Vec<F>& v) const {
    return unflatten(source_.quiver(), source_.field(), source_.dims(), target_.dims(), v);
  }
  void check(const RElement<F>& f) const {
    if (f.source_dims != source_.dims() || f.target_dims != target_.dims())
      throw std::invalid_argument("R-element does not lie in R(N,M) of this presentation");
    check_relement(source_.quiver(), f);
  }
  RElement<F> pi_reduce(const RElement<F>& f) const {
    check(f);
    return relement(image_.reduce(flatten(f)));
  }
  Vec<F> ext_coordinates_of(const RElement<F>& f) const {
    Vec<F> r = image_.reduce(flatten(f));
    Vec<F> out;
    for (auto c : ext_coords_) out.push_back(r[c]);
    return out;
  }
  bool is_split(const RElement<F>& f) const { return is_zero(pi_reduce(f)); }

 private:
  Representation<F> source_, target_;
  Matrix<F> d_;
  RowSpace<F> image_;
  std::vector<Vec<F>> kernel_;
  std::vector<std::size_t> col_offset_, row_offset_, ext_coords_;
};

template <class F>
ExtPresentation<F> assemble_d(const Representation<F>& n, const Representation<F>& m) {
  return ExtPresentation<F>(n, m);
}

template <class F>
std::vector<Morphism<F>> hom_basis(const Representation<F>& n, const Representation<F>& m) {
  return ExtPresentation<F>(n, m).hom_basis();
}

template <class F>
std::size_t hom_dim(const Representation<F>& n, const Representation<F>& m) {
  return ExtPresentation<F>(n, m).hom_dim();
}

template <class F>
std::size_t ext_dim(const Representation<F>& n, const Representation<F>& m) {
  return ExtPresentation<F>(n, m).ext_dim();
}

template <class F>
std::vector<RElement<F>> standard_basis(const ExtPresentation<F>& ep) {
  std::vector<RElement<F>> r;
  const Quiver& q = ep.source().quiver();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    for (std::size_t i = 0; i < ep.target().dim(ar.tgt); ++i)
      for (std::size_t j = 0; j < ep.source().dim(ar.src); ++j)
        r.push_back(standard_relement(q, ep.source().field(), ep.source().dims(), ep.target().dims(), a, i, j));
  }
  return r;
}

struct BasisSelection {
  std::vector<std::size_t> indices;
  bool complete = false;  // the selection spans Ext(N,M)
};

// Greedy choice of candidates whose classes form a basis of Ext(N,M).
template <class F>
BasisSelection represent_basis(const ExtPresentation<F>& ep, const std::vector<RElement<F>>& candidates) {
  RowSpace<F> span = ep.image_echelon();
  BasisSelection sel;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ep.check(candidates[i]);
    if (span.insert(flatten(candidates[i]))) sel.indices.push_back(i);
  }
  sel.complete = sel.indices.size() == ep.ext_dim();
  return sel;
}

template <class F>
std::vector<RElement<F>> represent_basis(const ExtPresentation<F>& ep) {
  auto cand = standard_basis(ep);
  auto sel = represent_basis(ep, cand);
  std::vector<RElement<F>> r;
  for (auto i : sel.indices) r.push_back(cand[i]);
  return r;
}

}  // namespace quivercells
