#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cells.hpp"
#include "cover.hpp"
#include "field.hpp"
#include "representation.hpp"

namespace quivercells {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1";
inline constexpr const char* library_version = "0.1.0";

inline const std::vector<std::string>& document_kinds() {
  static const std::vector<std::string> k{"quiver", "representation", "relement", "cell", "mosaic", "cover_rep", "report"};
  return k;
}

namespace io_detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

inline std::string key_path(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(key_path(path, key), "missing");
  return *it;
}

inline const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  return j;
}

inline std::string string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

inline bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

// Field elements are strings; plain integers are accepted on input.
template <class F>
typename F::value_type element(const F& k, const Json& j, const std::string& path) {
  std::string s;
  if (j.is_string()) s = j.get<std::string>();
  else if (j.is_number_integer()) s = std::to_string(j.get<long long>());
  else fail(path, "expected a field element string");
  try {
    return k.parse(s);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

template <class F>
Json matrix_to_json(const F& k, const Matrix<F>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(k.to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class F>
Matrix<F> matrix_from_json(const F& k, const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  array(j, path);
  if (j.size() != rows)
    fail(path, "matrix shape: expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix<F> m(k, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto rp = index_path(path, r);
    const auto& row = array(j[r], rp);
    if (row.size() != cols)
      fail(rp, "matrix shape: expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = element(k, row[c], index_path(rp, c));
  }
  return m;
}

}  // namespace io_detail

// ---- envelope

inline Json make_document(const std::string& kind, Json payload) {
  Json d;
  d["schema_version"] = schema_version;
  d["kind"] = kind;
  d["payload"] = std::move(payload);
  return d;
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

struct Document {
  std::string kind;
  Json payload;
};

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  std::string v = io_detail::string(io_detail::member(j, "schema_version", "$"), "$.schema_version");
  if (v != schema_version) io_detail::fail("$.schema_version", "unsupported version '" + v + "'");
  std::string kind = io_detail::string(io_detail::member(j, "kind", "$"), "$.kind");
  const auto& kinds = document_kinds();
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) io_detail::fail("$.kind", "unknown kind '" + kind + "'");
  return {kind, io_detail::member(j, "payload", "$")};
}

inline Json expect_kind(const Document& d, const std::string& kind) {
  if (d.kind != kind) throw ParseError("$.kind: expected a " + kind + " document, got " + d.kind);
  return d.payload;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---- quiver

inline Json to_json(const Quiver& q) {
  Json p;
  p["vertices"] = q.vertices();
  Json arrows = Json::array();
  for (const auto& a : q.arrows()) {
    Json x;
    x["id"] = a.id;
    x["src"] = q.vertex_id(a.src);
    x["tgt"] = q.vertex_id(a.tgt);
    arrows.push_back(std::move(x));
  }
  p["arrows"] = std::move(arrows);
  return p;
}

inline Quiver quiver_from_json(const Json& j, const std::string& path = "payload") {
  using namespace io_detail;
  Quiver q;
  const auto& vs = array(member(j, "vertices", path), key_path(path, "vertices"));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto vp = index_path(key_path(path, "vertices"), i);
    std::string id = string(vs[i], vp);
    if (q.find_vertex(id)) fail(vp, "duplicate vertex id '" + id + "'");
    q.add_vertex(id);
  }
  const auto& as = array(member(j, "arrows", path), key_path(path, "arrows"));
  for (std::size_t i = 0; i < as.size(); ++i) {
    auto ap = index_path(key_path(path, "arrows"), i);
    std::string id = string(member(as[i], "id", ap), key_path(ap, "id"));
    std::string s = string(member(as[i], "src", ap), key_path(ap, "src"));
    std::string t = string(member(as[i], "tgt", ap), key_path(ap, "tgt"));
    if (q.find_arrow(id)) fail(key_path(ap, "id"), "duplicate arrow id '" + id + "'");
    if (!q.find_vertex(s)) fail(key_path(ap, "src"), "unknown vertex '" + s + "'");
    if (!q.find_vertex(t)) fail(key_path(ap, "tgt"), "unknown vertex '" + t + "'");
    q.add_arrow(id, s, t);
  }
  return q;
}

// ---- dimension vectors, keyed by vertex id; absent vertices count as 0

inline Json dims_to_json(const Quiver& q, const DimVector& d) {
  Json j = Json::object();
  for (std::size_t v = 0; v < q.num_vertices(); ++v) j[q.vertex_id(v)] = d.at(v);
  return j;
}

inline DimVector dims_from_json(const Quiver& q, const Json& j, const std::string& path) {
  using namespace io_detail;
  if (!j.is_object()) fail(path, "expected an object of vertex dimensions");
  DimVector d(q.num_vertices(), 0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto kp = key_path(path, it.key());
    auto v = q.find_vertex(it.key());
    if (!v) fail(kp, "unknown vertex");
    long long x = integer(it.value(), kp);
    if (x < 0) fail(kp, "negative dimension");
    d[*v] = x;
  }
  return d;
}

inline FieldSpec field_from_json(const Json& j, const std::string& path = "payload") {
  auto fp = io_detail::key_path(path, "field");
  try {
    return FieldSpec::parse(io_detail::string(io_detail::member(j, "field", path), fp));
  } catch (const ParseError& e) {
    std::string m = e.what();
    if (m.rfind(fp, 0) == 0) throw;
    io_detail::fail(fp, m);
  }
}

// A document over Q may be read into F_p (reduction); anything else must match.
template <class F>
void check_field(const F& k, const Json& j, const std::string& path) {
  FieldSpec s = field_from_json(j, path);
  if (s == k.spec()) return;
  if (s.kind == FieldSpec::Kind::Rationals && k.spec().is_prime_field()) return;
  io_detail::fail(io_detail::key_path(path, "field"), "document field " + s.to_string() + " cannot be read over " + k.spec().to_string());
}

// ---- blocks keyed by arrow id; absent arrows are zero

template <class F>
Json blocks_to_json(const Quiver& q, const F& k, const std::vector<Matrix<F>>& blocks) {
  Json j = Json::object();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) j[q.arrow(a).id] = io_detail::matrix_to_json(k, blocks.at(a));
  return j;
}

template <class F>
std::vector<Matrix<F>> blocks_from_json(const Quiver& q, const F& k, const DimVector& src, const DimVector& tgt, const Json& j,
                                        const std::string& path) {
  using namespace io_detail;
  if (!j.is_object()) fail(path, "expected an object of arrow matrices");
  std::vector<Matrix<F>> out;
  for (const auto& a : q.arrows())
    out.emplace_back(k, static_cast<std::size_t>(tgt[a.tgt]), static_cast<std::size_t>(src[a.src]));
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto kp = key_path(path, it.key());
    auto a = q.find_arrow(it.key());
    if (!a) fail(kp, "unknown arrow");
    out[*a] = matrix_from_json(k, it.value(), out[*a].rows(), out[*a].cols(), kp);
  }
  return out;
}

// ---- representations

template <class F>
Json rep_body(const Representation<F>& m) {
  Json j;
  j["dims"] = dims_to_json(m.quiver(), m.dims());
  j["maps"] = blocks_to_json(m.quiver(), m.field(), m.maps());
  return j;
}

template <class F>
Representation<F> rep_body_from_json(const Quiver& q, const F& k, const Json& j, const std::string& path) {
  using namespace io_detail;
  DimVector d = dims_from_json(q, member(j, "dims", path), key_path(path, "dims"));
  Json maps = j.contains("maps") ? j["maps"] : Json::object();
  return Representation<F>(q, k, d, blocks_from_json(q, k, d, d, maps, key_path(path, "maps")));
}

template <class F>
Json to_json(const Representation<F>& m) {
  Json p;
  p["quiver"] = to_json(m.quiver());
  p["field"] = m.field().spec().to_string();
  Json body = rep_body(m);
  for (auto& [key, v] : body.items()) p[key] = v;
  return p;
}

template <class F>
Representation<F> representation_from_json(const F& k, const Json& j, const std::string& path = "payload") {
  Quiver q = quiver_from_json(io_detail::member(j, "quiver", path), io_detail::key_path(path, "quiver"));
  check_field(k, j, path);
  return rep_body_from_json(q, k, j, path);
}

// ---- elements of R(N,M)

template <class F>
Json relement_body(const Quiver& q, const F& k, const RElement<F>& f) {
  Json j;
  j["source_dims"] = dims_to_json(q, f.source_dims);
  j["target_dims"] = dims_to_json(q, f.target_dims);
  j["blocks"] = blocks_to_json(q, k, f.blocks);
  return j;
}

template <class F>
RElement<F> relement_body_from_json(const Quiver& q, const F& k, const Json& j, const std::string& path) {
  using namespace io_detail;
  RElement<F> f;
  f.source_dims = dims_from_json(q, member(j, "source_dims", path), key_path(path, "source_dims"));
  f.target_dims = dims_from_json(q, member(j, "target_dims", path), key_path(path, "target_dims"));
  Json blocks = j.contains("blocks") ? j["blocks"] : Json::object();
  f.blocks = blocks_from_json(q, k, f.source_dims, f.target_dims, blocks, key_path(path, "blocks"));
  return f;
}

template <class F>
Json to_json(const Quiver& q, const F& k, const RElement<F>& f) {
  Json p;
  p["quiver"] = to_json(q);
  p["field"] = k.spec().to_string();
  Json body = relement_body(q, k, f);
  for (auto& [key, v] : body.items()) p[key] = v;
  return p;
}

template <class F>
std::pair<Quiver, RElement<F>> relement_from_json(const F& k, const Json& j, const std::string& path = "payload") {
  Quiver q = quiver_from_json(io_detail::member(j, "quiver", path), io_detail::key_path(path, "quiver"));
  check_field(k, j, path);
  return {q, relement_body_from_json(q, k, j, path)};
}

// ---- cells and mosaics

inline Flag flag_from_string(const std::string& s, const std::string& path) {
  if (s == "unknown") return Flag::unknown;
  if (s == "verified") return Flag::verified;
  if (s == "certified") return Flag::certified;
  io_detail::fail(path, "unknown flag '" + s + "'");
}

template <class F>
Json cell_body(const Cell<F>& c) {
  const Quiver& q = c.base.quiver();
  const F& k = c.base.field();
  Json j;
  j["base"] = rep_body(c.base);
  Json params = Json::array();
  for (const auto& p : c.params) params.push_back(blocks_to_json(q, k, p.blocks));
  j["params"] = std::move(params);
  j["flags"] = {{"strong", to_string(c.strong)}, {"separating", to_string(c.separating)}, {"schurian", to_string(c.schurian)}};
  j["certificate"] = c.certificate;
  return j;
}

// Flags are kept only when the document field is the field read into.
template <class F>
Cell<F> cell_body_from_json(const Quiver& q, const F& k, const Json& j, const std::string& path, bool keep_flags) {
  using namespace io_detail;
  auto base = rep_body_from_json(q, k, member(j, "base", path), key_path(path, "base"));
  std::vector<RElement<F>> params;
  auto pp = key_path(path, "params");
  const auto& ps = j.contains("params") ? array(j["params"], pp) : Json::array();
  for (std::size_t i = 0; i < ps.size(); ++i)
    params.push_back({base.dims(), base.dims(), blocks_from_json(q, k, base.dims(), base.dims(), ps[i], index_path(pp, i))});
  Cell<F> c;
  try {
    c = make_cell(std::move(base), std::move(params));
  } catch (const std::invalid_argument& e) {
    fail(pp, e.what());
  }
  if (j.contains("flags") && keep_flags) {
    auto fp = key_path(path, "flags");
    const auto& f = j["flags"];
    c.strong = flag_from_string(string(member(f, "strong", fp), key_path(fp, "strong")), key_path(fp, "strong"));
    c.separating = flag_from_string(string(member(f, "separating", fp), key_path(fp, "separating")), key_path(fp, "separating"));
    c.schurian = flag_from_string(string(member(f, "schurian", fp), key_path(fp, "schurian")), key_path(fp, "schurian"));
  }
  if (j.contains("certificate") && keep_flags) {
    auto cp = key_path(path, "certificate");
    const auto& cs = array(j["certificate"], cp);
    for (std::size_t i = 0; i < cs.size(); ++i) c.certificate.push_back(string(cs[i], index_path(cp, i)));
  }
  return c;
}

template <class F>
Json to_json(const Cell<F>& c) {
  Json p;
  p["quiver"] = to_json(c.base.quiver());
  p["field"] = c.base.field().spec().to_string();
  Json body = cell_body(c);
  for (auto& [key, v] : body.items()) p[key] = v;
  return p;
}

template <class F>
Cell<F> cell_from_json(const F& k, const Json& j, const std::string& path = "payload") {
  Quiver q = quiver_from_json(io_detail::member(j, "quiver", path), io_detail::key_path(path, "quiver"));
  check_field(k, j, path);
  return cell_body_from_json(q, k, j, path, field_from_json(j, path) == k.spec());
}

template <class F>
Json to_json(const Quiver& q, const F& k, const Mosaic<F>& m) {
  Json p;
  p["quiver"] = to_json(q);
  p["field"] = k.spec().to_string();
  p["dimvector"] = dims_to_json(q, m.dimvector);
  p["disjoint_verified"] = m.disjoint_verified;
  Json cells = Json::array();
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    Json c;
    c["provenance"] = m.provenance[i];
    Json body = cell_body(m.cells[i]);
  for (auto& [key, v] : body.items()) c[key] = v;
    cells.push_back(std::move(c));
  }
  p["cells"] = std::move(cells);
  return p;
}

template <class F>
Json to_json(const Mosaic<F>& m) {
  if (m.cells.empty()) throw std::invalid_argument("an empty mosaic needs its quiver and field spelled out");
  return to_json(m.cells[0].base.quiver(), m.cells[0].base.field(), m);
}

template <class F>
Mosaic<F> mosaic_from_json(const F& k, const Json& j, const std::string& path = "payload") {
  using namespace io_detail;
  Quiver q = quiver_from_json(member(j, "quiver", path), key_path(path, "quiver"));
  check_field(k, j, path);
  bool same = field_from_json(j, path) == k.spec();
  Mosaic<F> m;
  m.dimvector = dims_from_json(q, member(j, "dimvector", path), key_path(path, "dimvector"));
  if (j.contains("disjoint_verified") && same) m.disjoint_verified = boolean(j["disjoint_verified"], key_path(path, "disjoint_verified"));
  auto cp = key_path(path, "cells");
  const auto& cs = array(member(j, "cells", path), cp);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto ip = index_path(cp, i);
    std::string how = cs[i].contains("provenance") ? string(cs[i]["provenance"], key_path(ip, "provenance")) : "";
    auto c = cell_body_from_json(q, k, cs[i], ip, same);
    if (c.base.dims() != m.dimvector) fail(key_path(ip, "base.dims"), "cell dimension vector differs from the mosaic");
    m.add(std::move(c), how);
  }
  return m;
}

// ---- cover representations
// Vertices are listed in pushdown order; maps name a base arrow and two list
// indices, and must sit on an arrow of the cover. Unlisted arrows are zero.

template <class F>
Json to_json(const CoverRepresentation<F>& cr) {
  const auto& w = cr.window;
  const Quiver& q = w.base;
  const F& k = cr.rep.field();
  auto order = pushdown_order(w, cr.order);
  std::vector<std::size_t> pos(w.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  Json p;
  p["quiver"] = to_json(q);
  p["field"] = k.spec().to_string();
  p["gamma"] = cr.gamma;
  p["radius"] = w.radius;
  Json vs = Json::array();
  for (auto i : order) {
    Json v;
    v["base"] = q.vertex_id(w.vertices[i].base);
    v["chi"] = w.vertices[i].chi;
    v["dim"] = cr.rep.dims()[i];
    vs.push_back(std::move(v));
  }
  p["vertices"] = std::move(vs);
  Json maps = Json::array();
  for (std::size_t e = 0; e < w.arrows.size(); ++e) {
    Json m;
    m["arrow"] = q.arrow(w.arrows[e].base_arrow).id;
    m["src"] = pos[w.arrows[e].src];
    m["tgt"] = pos[w.arrows[e].tgt];
    m["matrix"] = io_detail::matrix_to_json(k, cr.rep.map(e));
    maps.push_back(std::move(m));
  }
  p["maps"] = std::move(maps);
  return p;
}

template <class F>
CoverRepresentation<F> cover_rep_from_json(const F& k, const Json& j, const std::string& path = "payload") {
  using namespace io_detail;
  Quiver q = quiver_from_json(member(j, "quiver", path), key_path(path, "quiver"));
  check_field(k, j, path);
  std::vector<long long> gamma;
  auto gp = key_path(path, "gamma");
  const auto& g = array(member(j, "gamma", path), gp);
  if (g.size() != q.num_arrows()) fail(gp, "one entry per arrow expected");
  for (std::size_t i = 0; i < g.size(); ++i) gamma.push_back(integer(g[i], index_path(gp, i)));
  long long radius = integer(member(j, "radius", path), key_path(path, "radius"));
  if (radius < 0) fail(key_path(path, "radius"), "negative radius");

  auto vp = key_path(path, "vertices");
  const auto& vs = array(member(j, "vertices", path), vp);
  std::vector<CoverVertex> listed;
  std::vector<long long> dims;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto ip = index_path(vp, i);
    std::string b = string(member(vs[i], "base", ip), key_path(ip, "base"));
    auto bv = q.find_vertex(b);
    if (!bv) fail(key_path(ip, "base"), "unknown vertex '" + b + "'");
    CoverVertex v{*bv, {}};
    auto chp = key_path(ip, "chi");
    const auto& ch = array(member(vs[i], "chi", ip), chp);
    if (ch.size() != q.num_arrows()) fail(chp, "one entry per arrow expected");
    for (std::size_t a = 0; a < ch.size(); ++a) v.chi.push_back(integer(ch[a], index_path(chp, a)));
    if (std::find(listed.begin(), listed.end(), v) != listed.end()) fail(ip, "vertex listed twice");
    long long d = integer(member(vs[i], "dim", ip), key_path(ip, "dim"));
    if (d < 0) fail(key_path(ip, "dim"), "negative dimension");
    listed.push_back(v);
    dims.push_back(d);
  }
  CoverWindow w = induced_window(q, listed, radius);
  std::vector<std::size_t> order;
  DimVector wd(w.vertices.size(), 0);
  for (std::size_t i = 0; i < listed.size(); ++i) {
    order.push_back(*w.find(listed[i]));
    wd[order.back()] = dims[i];
  }
  Representation<F> rep(w.quiver, k, wd);
  auto mp = key_path(path, "maps");
  const auto& ms = j.contains("maps") ? array(j["maps"], mp) : Json::array();
  std::vector<bool> seen(w.arrows.size(), false);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    auto ip = index_path(mp, i);
    std::string aid = string(member(ms[i], "arrow", ip), key_path(ip, "arrow"));
    auto a = q.find_arrow(aid);
    if (!a) fail(key_path(ip, "arrow"), "unknown arrow '" + aid + "'");
    long long s = integer(member(ms[i], "src", ip), key_path(ip, "src"));
    long long t = integer(member(ms[i], "tgt", ip), key_path(ip, "tgt"));
    if (s < 0 || t < 0 || s >= static_cast<long long>(listed.size()) || t >= static_cast<long long>(listed.size()))
      fail(ip, "vertex index out of range");
    std::size_t ws = order[static_cast<std::size_t>(s)], wt = order[static_cast<std::size_t>(t)];
    std::optional<std::size_t> e;
    for (std::size_t x = 0; x < w.arrows.size(); ++x)
      if (w.arrows[x].base_arrow == *a && w.arrows[x].src == ws && w.arrows[x].tgt == wt) e = x;
    if (!e) fail(ip, "no cover arrow " + aid + " between these vertices (chi must step by e_" + aid + ")");
    if (seen[*e]) fail(ip, "arrow listed twice");
    seen[*e] = true;
    rep.map(*e) = matrix_from_json(k, member(ms[i], "matrix", ip), rep.map(*e).rows(), rep.map(*e).cols(), key_path(ip, "matrix"));
  }
  return {std::move(w), std::move(rep), std::move(gamma), std::move(order)};
}

// ---- hashing for report provenance

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 15];
  return s;
}

}  // namespace quivercells
