#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quivercells {

struct Arrow {
  std::string id;
  std::size_t src = 0;
  std::size_t tgt = 0;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

// Vertices and arrows are referred to by index internally; ids are kept for io.
class Quiver {
 public:
  Quiver() = default;
  explicit Quiver(std::vector<std::string> vertices) : vertices_(std::move(vertices)) { check_unique(vertices_, "vertex"); }

  std::size_t add_vertex(const std::string& id) {
    if (find_vertex(id)) throw std::invalid_argument("duplicate vertex id '" + id + "'");
    vertices_.push_back(id);
    return vertices_.size() - 1;
  }
  std::size_t add_arrow(const std::string& id, std::size_t src, std::size_t tgt) {
    if (src >= vertices_.size() || tgt >= vertices_.size()) throw std::out_of_range("arrow endpoint out of range");
    if (find_arrow(id)) throw std::invalid_argument("duplicate arrow id '" + id + "'");
    arrows_.push_back({id, src, tgt});
    return arrows_.size() - 1;
  }
  std::size_t add_arrow(const std::string& id, const std::string& src, const std::string& tgt) {
    return add_arrow(id, vertex(src), vertex(tgt));
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
  const std::string& vertex_id(std::size_t v) const { return vertices_.at(v); }

  std::optional<std::size_t> find_vertex(const std::string& id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i] == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> find_arrow(const std::string& id) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].id == id) return i;
    return std::nullopt;
  }
  std::size_t vertex(const std::string& id) const {
    auto v = find_vertex(id);
    if (!v) throw std::invalid_argument("unknown vertex '" + id + "'");
    return *v;
  }
  std::size_t arrow_index(const std::string& id) const {
    auto a = find_arrow(id);
    if (!a) throw std::invalid_argument("unknown arrow '" + id + "'");
    return *a;
  }

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  static void check_unique(const std::vector<std::string>& ids, const char* what) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        if (ids[i] == ids[j]) throw std::invalid_argument(std::string("duplicate ") + what + " id '" + ids[i] + "'");
  }

  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
};

// Indexed by vertex position in the owning quiver.
using DimVector = std::vector<long long>;

inline long long total_dim(const DimVector& a) { return std::accumulate(a.begin(), a.end(), 0LL); }

inline void check_dimvector(const Quiver& q, const DimVector& a) {
  if (a.size() != q.num_vertices()) throw std::invalid_argument("dimension vector does not match the quiver");
  for (auto x : a)
    if (x < 0) throw std::invalid_argument("negative entry in dimension vector");
}

inline long long euler_form(const Quiver& q, const DimVector& a, const DimVector& b) {
  check_dimvector(q, a);
  check_dimvector(q, b);
  long long s = 0;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) s += a[v] * b[v];
  for (const auto& ar : q.arrows()) s -= a[ar.src] * b[ar.tgt];
  return s;
}

struct LabeledQuiver {
  Quiver carrier;
  Quiver base;
  std::vector<std::size_t> vertex_labels;  // carrier vertex -> base vertex
  std::vector<std::size_t> arrow_labels;   // carrier arrow -> base arrow

  void validate() const {
    if (vertex_labels.size() != carrier.num_vertices() || arrow_labels.size() != carrier.num_arrows())
      throw std::invalid_argument("labeling has the wrong size");
    for (std::size_t e = 0; e < carrier.num_arrows(); ++e) {
      const auto& c = carrier.arrow(e);
      const auto& b = base.arrow(arrow_labels[e]);
      if (vertex_labels[c.src] != b.src || vertex_labels[c.tgt] != b.tgt)
        throw std::invalid_argument("labels do not commute with source and target");
      for (std::size_t f = 0; f < e; ++f) {
        const auto& d = carrier.arrow(f);
        if (arrow_labels[f] == arrow_labels[e] && d.src == c.src && d.tgt == c.tgt)
          throw std::invalid_argument("two arrows with the same label between the same vertices");
      }
    }
  }
};

// Underlying graph connected with |edges| = |vertices| - 1.
inline bool is_tree(const Quiver& q) {
  std::size_t n = q.num_vertices();
  if (n == 0 || q.num_arrows() != n - 1) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& a : q.arrows()) {
    auto x = find(a.src), y = find(a.tgt);
    if (x != y) {
      parent[x] = y;
      --components;
    }
  }
  return components == 1;
}

inline bool is_tree(const LabeledQuiver& lq) { return is_tree(lq.carrier); }

namespace quivers {

// K(n): vertices 0, 1 and arrows a_1..a_n from 0 to 1.
inline Quiver kronecker(std::size_t n) {
  Quiver q({"0", "1"});
  for (std::size_t i = 1; i <= n; ++i) q.add_arrow("a" + std::to_string(i), 0, 1);
  return q;
}

// S(n): vertices q0..qn, arrows a_i from q_i to q0.
inline Quiver subspace(std::size_t n) {
  Quiver q;
  for (std::size_t i = 0; i <= n; ++i) q.add_vertex("q" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i) q.add_arrow("a" + std::to_string(i), i, 0);
  return q;
}

// K(2,1): a, b from 0 to 1, c from 2 to 1.
inline Quiver k21() {
  Quiver q({"0", "1", "2"});
  q.add_arrow("a", 0, 1);
  q.add_arrow("b", 0, 1);
  q.add_arrow("c", 2, 1);
  return q;
}

// T(n): a1, a2 from q1 to q0 and b_i from q_{i+1} to q0, i = 1..n.
inline Quiver t_quiver(std::size_t n) {
  Quiver q;
  for (std::size_t i = 0; i <= n + 1; ++i) q.add_vertex("q" + std::to_string(i));
  q.add_arrow("a1", 1, 0);
  q.add_arrow("a2", 1, 0);
  for (std::size_t i = 1; i <= n; ++i) q.add_arrow("b" + std::to_string(i), i + 1, 0);
  return q;
}

}  // namespace quivers

}  // namespace quivercells
