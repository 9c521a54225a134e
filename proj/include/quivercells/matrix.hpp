#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"

namespace quivercells {

template <class F>
using Vec = std::vector<typename F::value_type>;

// Dense row-major matrix over F. Matrices act on column vectors.
template <class F>
class Matrix {
 public:
  using value_type = typename F::value_type;

  Matrix() = default;
  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }
  static Matrix from_rows(const F& field, const std::vector<Vec<F>>& rows, std::size_t cols) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static Matrix from_ints(const F& field, const std::vector<std::vector<long long>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    Matrix m(field, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = field.from_int(rows[i][j]);
    }
    return m;
  }
  // Columns given as vectors.
  static Matrix from_columns(const F& field, const std::vector<Vec<F>>& cols, std::size_t rows) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::vector<value_type>& data() { return data_; }
  const std::vector<value_type>& data() const { return data_; }

  Vec<F> row(std::size_t i) const { return Vec<F>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vec<F> col(std::size_t j) const {
    Vec<F> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!field_.is_zero(x)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = field_.add(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix r(*this);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = field_.sub(data_[k], o.data_[k]);
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(field_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const auto& a = (*this)(i, k);
        if (field_.is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = field_.add(r(i, j), field_.mul(a, o(k, j)));
      }
    return r;
  }
  Vec<F> operator*(const Vec<F>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    Vec<F> r(rows_, field_.zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) r[i] = field_.add(r[i], field_.mul((*this)(i, k), v[k]));
    return r;
  }
  Matrix scaled(const value_type& c) const {
    Matrix r(*this);
    for (auto& x : r.data_) x = field_.mul(c, x);
    return r;
  }
  Matrix transpose() const {
    Matrix r(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  // Copy `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) throw std::out_of_range("block out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
      for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r0 + i, c0 + j) = block(i, j);
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block out of range");
    Matrix r(field_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  F field_{};
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<value_type> data_;
};

template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

template <class F>
Echelon<F> rref(Matrix<F> m) {
  const F& k = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && k.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    auto inv = k.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = k.mul(inv, m(r, j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || k.is_zero(m(i, c))) continue;
      auto f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).rank();
}

template <class F>
std::vector<Vec<F>> kernel_basis(const Matrix<F>& m) {
  const F& k = m.field();
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(m.cols(), k.zero());
    v[free] = k.one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = k.neg(e.reduced(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& m, const Vec<F>& rhs) {
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve: rhs length mismatch");
  const F& k = m.field();
  Matrix<F> aug(k, m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < m.rows(); ++i) aug(i, m.cols()) = rhs[i];
  auto e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec<F> x(m.cols(), k.zero());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

template <class F>
bool invertible(const Matrix<F>& m) {
  return m.rows() == m.cols() && rank(m) == m.rows();
}

template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const F& k = m.field();
  std::size_t n = m.rows();
  Matrix<F> aug(k, n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, Matrix<F>::identity(k, n));
  auto e = rref(std::move(aug));
  if (e.rank() < n || (n > 0 && e.pivots[n - 1] != n - 1)) throw std::domain_error("singular matrix");
  return e.reduced.block(0, n, n, n);
}

// Row space kept in reduced echelon form; supports reduction of vectors modulo it.
template <class F>
class RowSpace {
 public:
  RowSpace(F field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient() const { return dim_; }
  const std::vector<Vec<F>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Zero out the pivot coordinates of v. The result depends only on v + span.
  Vec<F> reduce(Vec<F> v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      auto c = v[pivots_[i]];
      if (field_.is_zero(c)) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (!field_.is_zero(rows_[i][j])) v[j] = field_.sub(v[j], field_.mul(c, rows_[i][j]));
    }
    return v;
  }
  bool contains(const Vec<F>& v) const { return is_zero_vec(reduce(v)); }

  // Adds v; returns false if v already lies in the span.
  bool insert(const Vec<F>& v) {
    if (v.size() != dim_) throw std::invalid_argument("RowSpace: vector length mismatch");
    Vec<F> w = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && field_.is_zero(w[p])) ++p;
    if (p == dim_) return false;
    auto inv = field_.inv(w[p]);
    for (auto& x : w) x = field_.mul(inv, x);
    for (auto& r : rows_) {
      auto c = r[p];
      if (field_.is_zero(c)) continue;
      for (std::size_t j = 0; j < dim_; ++j) r[j] = field_.sub(r[j], field_.mul(c, w[j]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(w));
    return true;
  }

  bool is_zero_vec(const Vec<F>& v) const {
    for (const auto& x : v)
      if (!field_.is_zero(x)) return false;
    return true;
  }

 private:
  F field_;
  std::size_t dim_;
  std::vector<Vec<F>> rows_;
  std::vector<std::size_t> pivots_;
};

template <class F>
std::vector<std::size_t> select_independent_mod(const F& field, const std::vector<Vec<F>>& candidates,
                                                const std::vector<Vec<F>>& subspace) {
  std::size_t n = !candidates.empty() ? candidates[0].size() : (!subspace.empty() ? subspace[0].size() : 0);
  RowSpace<F> span(field, n);
  for (const auto& v : subspace) span.insert(v);
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (span.insert(candidates[i])) chosen.push_back(i);
  return chosen;
}

}  // namespace quivercells
