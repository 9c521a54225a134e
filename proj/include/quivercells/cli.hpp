#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cells.hpp"
#include "homalg.hpp"
#include "io.hpp"
#include "kac.hpp"
#include "stability.hpp"
#include "torus.hpp"

namespace quivercells::cli {

enum ExitCode { ok = 0, failure = 1, input_error = 2, undecided = 3, verification_failed = 4 };

// Thrown when a verification ran to completion and came out negative.
class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string field;
  std::uint32_t q = 0;
  long long window = -1;
  std::string gamma, theta;
  std::uint64_t budget = Budget{}.limit;
  unsigned shards = 1;
  std::uint64_t seed = 0;
  std::string out;

  std::vector<std::string> inputs;
  std::string quiver, dims, primes, side = "before";
  std::string lambda, mu;
  long long n = 0, d = 1, degree_bound = -1;
  std::size_t samples = 0;
};

inline std::vector<long long> parse_ints(const std::string& s, const std::string& what) {
  std::vector<long long> r;
  std::string t = s;
  if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  std::stringstream in(t);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      r.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError(what + ": '" + item + "' is not an integer");
    }
  }
  return r;
}

// kronecker:<n>, subspace:<n>, k21, t:<n>, or a path to any document with a quiver.
inline Quiver builtin_quiver(const std::string& s) {
  auto arg = [&](const std::string& prefix) -> std::optional<std::size_t> {
    if (s.rfind(prefix, 0) != 0) return std::nullopt;
    auto v = parse_ints(s.substr(prefix.size()), "--quiver");
    if (v.size() != 1 || v[0] < 0) throw ParseError("--quiver: bad size in '" + s + "'");
    return static_cast<std::size_t>(v[0]);
  };
  if (auto n = arg("kronecker:")) return quivers::kronecker(*n);
  if (auto n = arg("subspace:")) return quivers::subspace(*n);
  if (auto n = arg("t:")) return quivers::t_quiver(*n);
  if (s == "k21") return quivers::k21();
  throw ParseError("--quiver: unknown quiver '" + s + "'");
}

template <class Fn>
auto with_field(const FieldSpec& s, Fn&& fn) {
  if (s.is_prime_field()) return fn(PrimeField(s.p));
  return fn(Rationals{});
}

class Context {
 public:
  Context(std::string command, Options opt, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
      : command(std::move(command)), opt(std::move(opt)), out(out), err(err) {
    // the output path does not change the result
    for (std::size_t i = 0; i < argv.size(); ++i) {
      if (argv[i] == "--out") {
        ++i;
        continue;
      }
      if (argv[i].rfind("--out=", 0) == 0) continue;
      hash_ = fnv1a(argv[i] + '\0', hash_);
    }
  }

  std::string command;
  Options opt;
  std::ostream& out;
  std::ostream& err;

  Budget budget() const { return Budget{opt.budget}; }

  Document load(const std::string& path) {
    std::string text = read_file(path);
    hash_ = fnv1a(text, hash_);
    try {
      return parse_document(text);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }

  // --field, else Fp:<q>, else the field of the first input document.
  FieldSpec field(const std::optional<Document>& first = std::nullopt) const {
    if (!opt.field.empty()) return FieldSpec::parse(opt.field);
    if (opt.q) return FieldSpec::prime(opt.q);
    if (first) return field_from_json(first->payload);
    return FieldSpec::rationals();
  }

  std::uint32_t prime() const {
    if (opt.q) {
      if (!is_prime(opt.q)) throw ParseError("--q must be a prime");
      return opt.q;
    }
    if (!opt.field.empty()) {
      auto s = FieldSpec::parse(opt.field);
      if (s.is_prime_field()) return s.p;
    }
    throw ParseError(command + " needs a finite field: pass --q <prime>");
  }

  Quiver quiver() {
    if (opt.quiver.empty()) throw ParseError(command + " needs --quiver");
    if (opt.quiver.find(':') != std::string::npos || opt.quiver == "k21") return builtin_quiver(opt.quiver);
    auto d = load(opt.quiver);
    if (d.kind == "quiver") return quiver_from_json(d.payload);
    return quiver_from_json(io_detail::member(d.payload, "quiver", "payload"), "payload.quiver");
  }

  DimVector dims(const Quiver& q) const {
    if (opt.dims.empty()) throw ParseError(command + " needs --dims");
    auto v = parse_ints(opt.dims, "--dims");
    if (v.size() != q.num_vertices()) throw ParseError("--dims: one entry per vertex expected");
    for (auto x : v)
      if (x < 0) throw ParseError("--dims: negative dimension");
    return v;
  }

  std::vector<long long> weights(const std::string& s, const std::string& flag, std::size_t n) const {
    if (s.empty()) throw ParseError(command + " needs " + flag);
    auto v = parse_ints(s, flag);
    if (v.size() != n) throw ParseError(flag + ": " + std::to_string(n) + " entries expected");
    return v;
  }

  Json provenance() const {
    Json p;
    p["command"] = command;
    p["inputs_hash"] = hex64(hash_);
    p["version"] = library_version;
    p["schema_version"] = schema_version;
    p["seed"] = opt.seed;
    return p;
  }

  // Report to --out if requested; the text summary always goes to stdout.
  void finish_report(Json payload) {
    if (opt.out.empty()) return;
    Json p;
    p["provenance"] = provenance();
    for (auto& [k, v] : payload.items()) p[k] = v;
    write(make_document("report", std::move(p)));
  }

  // Constructed documents go to --out, or to stdout when there is none.
  void emit(const std::string& kind, Json payload, const std::string& summary) {
    auto doc = make_document(kind, std::move(payload));
    if (opt.out.empty()) {
      out << dump(doc);
      return;
    }
    write(doc);
    out << summary;
  }

  void write(const Json& doc) const {
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + opt.out + "'");
    f << dump(doc);
  }

  void warn(const std::string& s) const { err << "warning: " << s << "\n"; }

 private:
  std::uint64_t hash_ = fnv1a("quivercells");
};

// ---- helpers

template <class F>
Representation<F> load_rep(Context& cx, const F& k, const std::string& path) {
  auto d = cx.load(path);
  if (d.kind == "cell") return cell_from_json(k, d.payload).base;
  return representation_from_json(k, expect_kind(d, "representation"));
}

template <class F>
Cell<F> load_cell(Context& cx, const F& k, const std::string& path) {
  auto d = cx.load(path);
  if (d.kind == "representation") return point_cell(representation_from_json(k, d.payload));
  return cell_from_json(k, expect_kind(d, "cell"));
}

template <class F>
RElement<F> load_relement(Context& cx, const F& k, const std::string& path, const Quiver& q) {
  auto [rq, f] = relement_from_json(k, expect_kind(cx.load(path), "relement"));
  if (!(rq == q)) throw ParseError(path + ": quiver differs from the representations");
  return f;
}

inline std::optional<Document> peek(Context& cx, std::size_t i) {
  if (cx.opt.inputs.size() <= i) return std::nullopt;
  return parse_document(read_file(cx.opt.inputs[i]));
}

inline void need_inputs(const Context& cx, std::size_t n, const std::string& usage) {
  if (cx.opt.inputs.size() != n) throw ParseError(cx.command + " expects " + usage);
}

inline std::string dims_string(const DimVector& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

inline std::string list_string(const std::vector<long long>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

inline StarSide side_of(const std::string& s) {
  if (s == "before") return StarSide::before;
  if (s == "after") return StarSide::after;
  throw ParseError("--side must be before or after");
}

template <class F>
std::vector<RElement<F>> ext_selection(const Representation<F>& n, const Representation<F>& m, bool& complete) {
  ExtPresentation<F> ep(n, m);
  auto cands = standard_basis(ep);
  auto sel = represent_basis(ep, cands);
  complete = sel.complete;
  std::vector<RElement<F>> r;
  for (auto i : sel.indices) r.push_back(cands[i]);
  return r;
}

inline std::vector<std::uint32_t> primes_option(const Context& cx, std::size_t need) {
  std::vector<std::uint32_t> ps;
  if (!cx.opt.primes.empty()) {
    for (auto p : parse_ints(cx.opt.primes, "--primes")) {
      if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw ParseError("--primes: " + std::to_string(p) + " is not prime");
      ps.push_back(static_cast<std::uint32_t>(p));
    }
    return ps;
  }
  for (std::uint32_t p = 2; ps.size() < need; ++p)
    if (is_prime(p)) ps.push_back(p);
  return ps;
}

inline KacReport kac_report(Context& cx, const Quiver& q, const DimVector& alpha) {
  long long bound = cx.opt.degree_bound >= 0 ? cx.opt.degree_bound : default_degree_bound(q, alpha);
  auto ps = primes_option(cx, static_cast<std::size_t>(bound) + 1);
  std::vector<KacSample> samples;
  for (auto p : ps) samples.push_back(count_classes(q, alpha, p, cx.budget(), cx.opt.shards));
  auto r = interpolate(samples, bound);
  if (!r.note.empty()) cx.warn(r.note);
  return r;
}

inline Json sample_json(const KacSample& s) {
  Json j;
  j["q"] = s.q;
  j["abs_indec_classes"] = s.abs_indec_classes.get_str();
  j["indec_classes"] = s.indec_classes.get_str();
  j["all_classes"] = s.all_classes.get_str();
  j["points"] = s.point_count.get_str();
  return j;
}

inline Json kac_json(const KacReport& r) {
  Json j;
  j["degree_bound"] = r.degree_bound_used;
  Json ss = Json::array();
  for (const auto& s : r.samples) ss.push_back(sample_json(s));
  j["samples"] = std::move(ss);
  if (r.polynomial) {
    Json c = Json::array();
    for (const auto& x : *r.polynomial) c.push_back(x.get_str());
    j["coefficients"] = std::move(c);
    j["polynomial"] = polynomial_string(*r.polynomial);
  } else {
    j["coefficients"] = nullptr;
  }
  j["nonnegative"] = r.nonnegative;
  j["trusted"] = r.trusted;
  j["note"] = r.note;
  return j;
}

inline void print_kac(std::ostream& out, const KacReport& r) {
  for (const auto& s : r.samples)
    out << "q=" << s.q << ": absolutely indecomposable " << s.abs_indec_classes << ", indecomposable " << s.indec_classes
        << ", all classes " << s.all_classes << "\n";
  out << "degree bound: " << r.degree_bound_used << "\n";
  if (r.polynomial) out << "polynomial: " << polynomial_string(*r.polynomial) << "\n";
  else out << "polynomial: none\n";
  out << "trusted: " << (r.trusted ? "yes" : "no") << "\n";
  if (!r.note.empty()) out << "note: " << r.note << "\n";
}

// Masks for the attracting cell: nonzero entries of T, '*' at free positions.
template <class F>
std::vector<std::string> mask_rows(const Representation<F>& t, std::size_t a, const std::set<MatrixPosition>& free) {
  const auto& m = t.map(a);
  std::vector<std::string> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::string s;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::string e = free.count({a, r, c}) ? "*" : t.field().to_string(m(r, c));
      s += (c ? " " : "") + e;
    }
    rows.push_back(s);
  }
  return rows;
}

inline std::vector<std::string> unipotent_rows(std::size_t dim, std::size_t v, const std::vector<UnipotentPosition>& u) {
  std::set<UnipotentPosition> free(u.begin(), u.end());
  std::vector<std::string> rows;
  for (std::size_t r = 0; r < dim; ++r) {
    std::string s;
    for (std::size_t c = 0; c < dim; ++c) s += std::string(c ? " " : "") + (r == c ? "1" : free.count({v, r, c}) ? "*" : "0");
    rows.push_back(s);
  }
  return rows;
}

inline void print_block(std::ostream& out, const std::string& title, const std::vector<std::string>& rows) {
  out << "  " << title << (rows.empty() ? " (empty)" : "") << "\n";
  for (const auto& r : rows) out << "    [" << r << "]\n";
}

struct CellSummary {
  Json points = Json::array();
  std::vector<long long> dims;
};

// Fixed points with their cell dimensions, each attracting cell reduced to a section.
inline CellSummary torus_cells(Context& cx, const Quiver& q, const DimVector& alpha, std::ostream* text) {
  auto theta = cx.weights(cx.opt.theta, "--theta", q.num_vertices());
  auto gamma = cx.weights(cx.opt.gamma, "--gamma", q.num_arrows());
  FixedPointOptions fo;
  fo.radius = cx.opt.window >= 0 ? cx.opt.window : total_dim(alpha);
  fo.budget = cx.budget();
  auto fp = fixed_points(q, alpha, theta, gamma, fo);
  if (fp.outside_window) cx.warn(std::to_string(fp.outside_window) + " compatible lifts do not fit the window; results are complete within radius " +
                                 std::to_string(fo.radius) + " only");
  if (!fp.non_tree.empty()) cx.warn(std::to_string(fp.non_tree.size()) + " exceptional lifts have no tree representative and are skipped");
  CellSummary s;
  for (const auto& cr : fp.points) {
    auto ad = attracting_space(cr);
    auto sec = cell_section(ad);
    s.dims.push_back(ad.cell_dim());
    Json p;
    p["dims"] = dims_to_json(q, ad.lift.dims());
    p["weights"] = ad.weights;
    p["cell_dim"] = ad.cell_dim();
    p["point"] = rep_body(ad.lift);
    Json sj = Json::array();
    for (const auto& m : sec) sj.push_back({{"arrow", q.arrow(m.arrow).id}, {"row", m.row}, {"col", m.col}});
    p["section"] = std::move(sj);
    s.points.push_back(std::move(p));
    if (text) {
      *text << "fixed point " << s.dims.size() << ": cell dim " << ad.cell_dim() << "\n";
      std::set<MatrixPosition> free(sec.begin(), sec.end());
      for (std::size_t a = 0; a < q.num_arrows(); ++a) print_block(*text, q.arrow(a).id + ":", mask_rows(ad.lift, a, free));
    }
  }
  if (text) {
    *text << "fixed points: " << fp.points.size() << "\n";
    *text << "window radius: " << fo.radius << "\n";
  }
  return s;
}

// ---- commands

inline int cmd_hom(Context& cx) {
  need_inputs(cx, 2, "N.json M.json");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto n = load_rep(cx, k, cx.opt.inputs[0]);
    auto m = load_rep(cx, k, cx.opt.inputs[1]);
    ExtPresentation ep(n, m);
    long long euler = euler_form(n.quiver(), n.dims(), m.dims());
    cx.out << "hom_dim: " << ep.hom_dim() << "\n" << "ext_dim: " << ep.ext_dim() << "\n" << "euler_form: " << euler << "\n";
    Json basis = Json::array();
    for (const auto& phi : hom_basis(n, m)) {
      Json b = Json::object();
      for (std::size_t v = 0; v < n.quiver().num_vertices(); ++v)
        b[n.quiver().vertex_id(v)] = io_detail::matrix_to_json(k, phi.components[v]);
      basis.push_back(std::move(b));
    }
    cx.finish_report({{"hom_dim", ep.hom_dim()}, {"ext_dim", ep.ext_dim()}, {"euler_form", euler}, {"hom_basis", basis}});
    return ok;
  });
}

inline int cmd_ext_basis(Context& cx) {
  need_inputs(cx, 2, "N.json M.json (a basis of Ext(N,M) inside R(N,M))");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto n = load_rep(cx, k, cx.opt.inputs[0]);
    auto m = load_rep(cx, k, cx.opt.inputs[1]);
    const Quiver& q = n.quiver();
    bool complete = false;
    auto sel = ext_selection(n, m, complete);
    bool trees = is_tree(coefficient_quiver(n)) && is_tree(coefficient_quiver(m));
    bool tree_shaped = trees;
    Json items = Json::array();
    cx.out << "ext_dim: " << sel.size() << "\n";
    for (const auto& e : sel) {
      bool t = trees && is_tree(coefficient_quiver(middle_term(m, n, e)));
      tree_shaped = tree_shaped && t;
      cx.out << "  " << describe(q, k, e) << (t ? "  (tree)" : "") << "\n";
      Json x = relement_body(q, k, e);
      x["middle_term_is_tree"] = t;
      items.push_back(std::move(x));
    }
    cx.out << "complete: " << (complete ? "yes" : "no") << "\n" << "tree_shaped: " << (tree_shaped ? "yes" : "no") << "\n";
    if (!complete) cx.warn("standard vectors do not span Ext");
    cx.finish_report({{"ext_dim", sel.size()}, {"complete", complete}, {"tree_shaped", tree_shaped}, {"basis", items}});
    return ok;
  });
}

inline int cmd_middle_term(Context& cx) {
  need_inputs(cx, 3, "M.json N.json E.json (E in R(N,M))");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto m = load_rep(cx, k, cx.opt.inputs[0]);
    auto n = load_rep(cx, k, cx.opt.inputs[1]);
    auto e = load_relement(cx, k, cx.opt.inputs[2], m.quiver());
    auto lambda = cx.opt.lambda.empty() ? zero_relement(m, m) : load_relement(cx, k, cx.opt.lambda, m.quiver());
    auto mu = cx.opt.mu.empty() ? zero_relement(n, n) : load_relement(cx, k, cx.opt.mu, m.quiver());
    auto b = middle_term(m, n, e, lambda, mu);
    cx.emit("representation", to_json(b), "middle term " + dims_string(b.dims()) + " written to " + cx.opt.out + "\n");
    return ok;
  });
}

inline int cmd_deform(Context& cx) {
  need_inputs(cx, 2, "M.json LAMBDA.json");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto m = load_rep(cx, k, cx.opt.inputs[0]);
    auto l = load_relement(cx, k, cx.opt.inputs[1], m.quiver());
    auto b = deform(m, l);
    cx.emit("representation", to_json(b), "deformation written to " + cx.opt.out + "\n");
    return ok;
  });
}

inline int cmd_indec(Context& cx) {
  need_inputs(cx, 1, "M.json");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto m = load_rep(cx, k, cx.opt.inputs[0]);
    auto e = analyze_end(m, cx.budget());
    cx.out << "end_dim: " << e.end_dim << "\n"
           << "indecomposable: " << (e.is_local ? "yes" : "no") << "\n"
           << "absolutely_indecomposable: " << (e.is_absolutely_indec ? "yes" : "no") << "\n"
           << "schurian: " << (e.end_dim == 1 ? "yes" : "no") << "\n";
    Json r{{"end_dim", e.end_dim}, {"indecomposable", e.is_local}, {"absolutely_indecomposable", e.is_absolutely_indec},
           {"schurian", e.end_dim == 1}};
    if (k.finite()) {
      cx.out << "automorphisms: " << e.unit_count << "\n";
      r["automorphisms"] = e.unit_count.get_str();
    }
    cx.finish_report(r);
    return ok;
  });
}

inline int cmd_iso(Context& cx) {
  need_inputs(cx, 2, "A.json B.json");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto a = load_rep(cx, k, cx.opt.inputs[0]);
    auto b = load_rep(cx, k, cx.opt.inputs[1]);
    bool iso = is_isomorphic(a, b, cx.budget());
    cx.out << "isomorphic: " << (iso ? "yes" : "no") << "\n";
    cx.finish_report({{"isomorphic", iso}});
    return ok;
  });
}

inline PrimeField finite_field_for(Context& cx) {
  auto first = peek(cx, 0);
  if (cx.opt.q || !cx.opt.field.empty()) return PrimeField(cx.prime());
  auto s = field_from_json(first->payload);
  if (!s.is_prime_field()) throw ParseError(cx.command + " works over F_p: pass --q <prime>");
  return PrimeField(s.p);
}

inline int cmd_stable(Context& cx) {
  need_inputs(cx, 1, "M.json");
  auto k = finite_field_for(cx);
  auto m = load_rep(cx, k, cx.opt.inputs[0]);
  auto theta = cx.weights(cx.opt.theta, "--theta", m.quiver().num_vertices());
  auto s = is_stable(m, theta, cx.budget());
  cx.out << "stability: " << to_string(s) << "\n" << "slope: " << slope(theta, m.dims()).get_str() << "\n";
  cx.finish_report({{"stability", to_string(s)}, {"slope", slope(theta, m.dims()).get_str()}});
  return ok;
}

inline int cmd_hn(Context& cx) {
  need_inputs(cx, 1, "M.json");
  auto k = finite_field_for(cx);
  auto m = load_rep(cx, k, cx.opt.inputs[0]);
  auto theta = cx.weights(cx.opt.theta, "--theta", m.quiver().num_vertices());
  auto h = scss_and_hn(m, theta, cx.budget());
  Json steps = Json::array();
  for (std::size_t i = 0; i < h.filtration.size(); ++i) {
    cx.out << "M_" << i + 1 << ": " << dims_string(h.filtration[i]) << "  slope " << h.slopes[i].get_str() << "\n";
    steps.push_back({{"dims", dims_to_json(m.quiver(), h.filtration[i])},
                     {"subquotient", rep_body(h.subquotients[i])},
                     {"slope", h.slopes[i].get_str()}});
  }
  cx.finish_report({{"filtration", steps}});
  return ok;
}

inline int cmd_schur_level(Context& cx) {
  auto q = cx.quiver();
  auto alpha = cx.dims(q);
  auto p = cx.prime();
  auto s = schur_level(q, alpha, p, cx.budget());
  cx.out << "schur_level: " << s << "\n";
  cx.finish_report({{"schur_level", s}, {"q", p}});
  return ok;
}

inline int cmd_schubert_mosaic(Context& cx) {
  if (!cx.opt.inputs.empty() && cx.opt.inputs.size() != 2)
    throw ParseError("schubert-mosaic expects either --n <arrows> or M.json N.json");
  GrassmannOptions go;
  go.d = static_cast<std::size_t>(cx.opt.d);
  go.side = side_of(cx.opt.side);
  if (cx.opt.d < 1) throw ParseError("--d must be positive");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    using F = std::decay_t<decltype(k)>;
    Cell<F> cm, cn;
    if (cx.opt.inputs.empty()) {
      if (cx.opt.n < 1) throw ParseError("schubert-mosaic needs --n <arrows> for the Kronecker quiver");
      auto q = quivers::kronecker(static_cast<std::size_t>(cx.opt.n));
      cm = point_cell(simple(q, k, 1));
      cn = point_cell(simple(q, k, 0));
    } else {
      cm = load_cell(cx, k, cx.opt.inputs[0]);
      cn = load_cell(cx, k, cx.opt.inputs[1]);
    }
    bool complete = false;
    auto u = ext_selection(cn.base, cm.base, complete);
    auto mo = grassmann_mosaic(cm, cn, u, go);
    std::string s = "cells: " + std::to_string(mo.cells.size()) + "\n";
    cx.emit("mosaic", to_json(cm.base.quiver(), k, mo), s);
    return ok;
  });
}

inline int cmd_tree_cells(Context& cx) {
  need_inputs(cx, 2, "S.json T.json (quotient, then sub)");
  return with_field(cx.field(peek(cx, 0)), [&](const auto& k) {
    auto cs = load_cell(cx, k, cx.opt.inputs[0]);
    auto ct = load_cell(cx, k, cx.opt.inputs[1]);
    bool complete = false;
    auto basis = ext_selection(cs.base, ct.base, complete);
    auto mo = tree_cell_recursion(cs, ct, basis, side_of(cx.opt.side));
    cx.emit("mosaic", to_json(cs.base.quiver(), k, mo), "cells: " + std::to_string(mo.cells.size()) + "\n");
    return ok;
  });
}

inline int cmd_subspace_tnf(Context& cx) {
  if (cx.opt.n < 3) throw ParseError("subspace-tnf needs --n >= 3");
  return with_field(cx.field(), [&](const auto& k) {
    auto mo = subspace_tnf(k, static_cast<std::size_t>(cx.opt.n));
    std::string s = "cells: " + std::to_string(mo.cells.size()) + "\n";
    cx.emit("mosaic", to_json(quivers::subspace(static_cast<std::size_t>(cx.opt.n)), k, mo), s);
    return ok;
  });
}

inline int cmd_mosaic_verify(Context& cx) {
  need_inputs(cx, 1, "MOSAIC.json");
  PrimeField k(cx.prime());
  auto mo = mosaic_from_json(k, expect_kind(cx.load(cx.opt.inputs[0]), "mosaic"));
  auto r = verify_mosaic(mo, cx.budget(), cx.opt.shards);
  cx.out << "q: " << r.q << "\n"
         << "cells: " << mo.cells.size() << "\n"
         << "points: " << r.points << "\n"
         << "members: " << r.members << "\n"
         << "covered: " << r.covered << "\n"
         << "total: " << r.total_indec_classes << "\n"
         << "multiply_covered: " << r.multiply_covered << "\n"
         << "uncovered_points: " << r.uncovered_points << "\n"
         << "non_indecomposable_members: " << r.non_indecomposable_members << "\n"
         << "non_absolute_classes: " << r.non_absolute_classes << "\n";
  for (const auto& o : r.overlaps) cx.out << "overlap: " << o << "\n";
  cx.out << "verified: " << (r.verified() ? "yes" : "no") << "\n";
  Json flags = Json::array();
  for (const auto& c : r.mosaic.cells)
    flags.push_back({{"strong", to_string(c.strong)}, {"separating", to_string(c.separating)}, {"schurian", to_string(c.schurian)}});
  cx.finish_report({{"q", r.q},
                    {"cells", mo.cells.size()},
                    {"points", r.points},
                    {"members", r.members},
                    {"covered", r.covered},
                    {"total", r.total_indec_classes},
                    {"multiply_covered", r.multiply_covered},
                    {"uncovered_points", r.uncovered_points},
                    {"non_indecomposable_members", r.non_indecomposable_members},
                    {"non_absolute_classes", r.non_absolute_classes},
                    {"overlaps", r.overlaps},
                    {"cell_flags", flags},
                    {"verified", r.verified()}});
  if (!r.verified()) throw VerificationFailed("mosaic does not verify at q=" + std::to_string(r.q));
  return ok;
}

inline int cmd_fixed_points(Context& cx) {
  auto q = cx.quiver();
  auto alpha = cx.dims(q);
  auto s = torus_cells(cx, q, alpha, &cx.out);
  cx.finish_report({{"points", s.points}, {"cell_dims", s.dims}});
  return ok;
}

inline int cmd_poincare(Context& cx) {
  auto q = cx.quiver();
  auto alpha = cx.dims(q);
  auto s = torus_cells(cx, q, alpha, nullptr);
  auto p = poincare(s.dims);
  std::vector<mpz_class> c;
  for (auto x : p) c.emplace_back(static_cast<long>(x));
  cx.out << "fixed points: " << s.dims.size() << "\n"
         << "coefficients: " << list_string(p) << "\n"
         << "polynomial: " << polynomial_string(c) << "\n";
  cx.finish_report({{"coefficients", p}, {"cell_dims", s.dims}});
  return ok;
}

inline int cmd_att_cell(Context& cx) {
  need_inputs(cx, 1, "COVER.json");
  auto doc = cx.load(cx.opt.inputs[0]);
  auto cr = cover_rep_from_json(Rationals{}, expect_kind(doc, "cover_rep"));
  if (!cx.opt.gamma.empty()) cr.gamma = cx.weights(cx.opt.gamma, "--gamma", cr.window.base.num_arrows());
  auto ad = attracting_space(cr);
  auto sec = cell_section(ad);
  const Quiver& q = cr.window.base;
  cx.out << "gamma: " << list_string(cr.gamma) << "\n";
  std::set<MatrixPosition> vt(ad.v_t.begin(), ad.v_t.end()), ss(sec.begin(), sec.end());
  cx.out << "Att(T) = T + V_T, dim V_T = " << ad.v_t.size() << "\n";
  for (std::size_t a = 0; a < q.num_arrows(); ++a) print_block(cx.out, q.arrow(a).id + ":", mask_rows(ad.lift, a, vt));
  cx.out << "U_psi, dim " << ad.u_psi.size() << "\n";
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    print_block(cx.out, q.vertex_id(v) + ":", unipotent_rows(ad.lift.dim(v), v, ad.u_psi));
  cx.out << "section, dim " << sec.size() << "\n";
  for (std::size_t a = 0; a < q.num_arrows(); ++a) print_block(cx.out, q.arrow(a).id + ":", mask_rows(ad.lift, a, ss));
  cx.out << "cell_dim: " << ad.cell_dim() << "\n";

  auto masks = [&](const std::set<MatrixPosition>& free) {
    Json j = Json::object();
    for (std::size_t a = 0; a < q.num_arrows(); ++a) j[q.arrow(a).id] = mask_rows(ad.lift, a, free);
    return j;
  };
  Json upsi = Json::object();
  for (std::size_t v = 0; v < q.num_vertices(); ++v) upsi[q.vertex_id(v)] = unipotent_rows(ad.lift.dim(v), v, ad.u_psi);
  Json r{{"gamma", cr.gamma},  {"point", rep_body(ad.lift)}, {"weights", ad.weights}, {"attracting", masks(vt)},
         {"u_psi", upsi},      {"section", masks(ss)},       {"cell_dim", ad.cell_dim()}};

  bool failed = false;
  if (cx.opt.q) {
    PrimeField k(cx.prime());
    auto t = change_field(ad.lift, k);
    std::optional<StabilityWeights> theta;
    if (!cx.opt.theta.empty()) theta = cx.weights(cx.opt.theta, "--theta", q.num_vertices());
    auto chk = verify_section(t, sec, theta, cx.budget());
    cx.out << "section at q=" << k.order() << ": " << chk.points << " points, indecomposable "
           << (chk.all_indecomposable ? "yes" : "no") << ", separating " << (chk.separating ? "yes" : "no");
    if (theta) cx.out << ", stable " << (chk.all_stable ? "yes" : "no");
    cx.out << "\n";
    r["section_check"] = {{"q", k.order()},
                          {"points", chk.points},
                          {"indecomposable", chk.all_indecomposable},
                          {"separating", chk.separating},
                          {"stable", theta ? Json(chk.all_stable) : Json(nullptr)}};
    if (theta && cx.opt.samples) {
      std::mt19937_64 rng(cx.opt.seed);
      bool st = sample_attractor_stability(t, ad.v_t, *theta, cx.opt.samples, rng, cx.budget());
      cx.out << "sampled attracting points stable: " << (st ? "yes" : "no") << "\n";
      r["section_check"]["sampled_attracting_stable"] = st;
      failed = failed || !st;
    }
    failed = failed || !chk.all_indecomposable || !chk.separating || (theta && !chk.all_stable);
  }
  cx.finish_report(r);
  if (failed) throw VerificationFailed("section check failed");
  return ok;
}

inline int cmd_kac_count(Context& cx) {
  auto q = cx.quiver();
  auto alpha = cx.dims(q);
  auto s = count_classes(q, alpha, cx.prime(), cx.budget(), cx.opt.shards);
  cx.out << "q: " << s.q << "\n"
         << "points: " << s.point_count << "\n"
         << "absolutely_indecomposable: " << s.abs_indec_classes << "\n"
         << "indecomposable: " << s.indec_classes << "\n"
         << "all_classes: " << s.all_classes << "\n";
  cx.finish_report(sample_json(s));
  return ok;
}

inline int cmd_kac_poly(Context& cx) {
  auto q = cx.quiver();
  auto alpha = cx.dims(q);
  auto r = kac_report(cx, q, alpha);
  print_kac(cx.out, r);
  cx.finish_report(kac_json(r));
  if (!r.polynomial) throw VerificationFailed("no integer polynomial fits the samples");
  return ok;
}

inline int cmd_crosscheck(Context& cx) {
  need_inputs(cx, 1, "MOSAIC.json");
  auto doc = cx.load(cx.opt.inputs[0]);
  auto payload = expect_kind(doc, "mosaic");
  return with_field(field_from_json(payload), [&](const auto& k) {
    auto mo = mosaic_from_json(k, payload);
    auto q = quiver_from_json(payload["quiver"], "payload.quiver");
    auto r = kac_report(cx, q, mo.dimvector);
    print_kac(cx.out, r);
    if (!r.polynomial) throw VerificationFailed("no integer polynomial fits the samples");
    auto v = crosscheck_cells(r, mo);
    cx.out << "cells: " << v.cell_count << ", a(1) = " << v.value_at_one << (v.total_match ? "  match" : "  MISMATCH") << "\n";
    Json cs = Json::array();
    for (const auto& c : v.coefficients) {
      cx.out << "c_" << c.degree << " = " << c.coefficient << ", cells of dim " << c.degree << ": " << c.cells
             << (c.match ? "  match" : "  MISMATCH") << "\n";
      cs.push_back({{"degree", c.degree}, {"coefficient", c.coefficient.get_str()}, {"cells", c.cells}, {"match", c.match}});
    }
    cx.out << "crosscheck: " << (v.all_match() ? "match" : "mismatch") << "\n";
    Json rep = kac_json(r);
    rep["value_at_one"] = v.value_at_one.get_str();
    rep["cell_count"] = v.cell_count;
    rep["coefficient_checks"] = cs;
    rep["match"] = v.all_match();
    cx.finish_report(rep);
    if (!v.all_match()) throw VerificationFailed("cell counts disagree with the interpolated polynomial");
    return ok;
  });
}

// ---- entry point

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with quiver representations, cells and mosaics"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(Context&);
  };
  const std::vector<Command> commands{
      {"hom", "dim Hom(N,M), dim Ext(N,M) and a Hom basis", cmd_hom},
      {"ext-basis", "standard vectors representing a basis of Ext(N,M)", cmd_ext_basis},
      {"middle-term", "middle term B(tau, lambda, mu) of an extension", cmd_middle_term},
      {"deform", "deformation M(lambda)", cmd_deform},
      {"indec", "endomorphism ring analysis", cmd_indec},
      {"iso", "isomorphism test", cmd_iso},
      {"stable", "theta-stability over F_p", cmd_stable},
      {"hn", "Harder-Narasimhan filtration over F_p", cmd_hn},
      {"schur-level", "largest End dimension of an indecomposable point", cmd_schur_level},
      {"schubert-mosaic", "Grassmann mosaic from two Schurian cells", cmd_schubert_mosaic},
      {"tree-cells", "tree cells of extensions of S by T", cmd_tree_cells},
      {"subspace-tnf", "cellular tree normal form for the subspace quiver", cmd_subspace_tnf},
      {"mosaic-verify", "verify a mosaic over F_q by enumeration", cmd_mosaic_verify},
      {"fixed-points", "torus fixed points of a stable moduli space", cmd_fixed_points},
      {"att-cell", "attracting cell and section of a cover representation", cmd_att_cell},
      {"poincare", "Poincare polynomial from the cell decomposition", cmd_poincare},
      {"kac-count", "count isomorphism classes over F_q", cmd_kac_count},
      {"kac-poly", "interpolate the Kac polynomial", cmd_kac_poly},
      {"crosscheck", "compare a mosaic's cell counts with the Kac polynomial", cmd_crosscheck},
  };
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    by_app[sub] = &c;
    sub->add_option("inputs", opt.inputs, "input documents");
    sub->add_option("--field", opt.field, "Q or Fp:<p>");
    sub->add_option("--q", opt.q, "prime field size");
    sub->add_option("--window", opt.window, "cover window radius");
    sub->add_option("--gamma", opt.gamma, "torus weights, one per arrow (comma separated)");
    sub->add_option("--theta", opt.theta, "stability, one per vertex (comma separated)");
    sub->add_option("--budget", opt.budget, "enumeration budget");
    sub->add_option("--shards", opt.shards, "worker threads for enumeration")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--out", opt.out, "write the document or report here");
    sub->add_option("--quiver", opt.quiver, "kronecker:<n>, subspace:<n>, k21, t:<n> or a document path");
    sub->add_option("--dims", opt.dims, "dimension vector (comma separated)");
    sub->add_option("--primes", opt.primes, "sample primes (comma separated)");
    sub->add_option("--degree-bound", opt.degree_bound, "interpolation degree bound");
    sub->add_option("--n", opt.n, "size parameter");
    sub->add_option("--d", opt.d, "Grassmannian rank");
    sub->add_option("--side", opt.side, "star placement: before or after");
    sub->add_option("--lambda", opt.lambda, "deformation of M (relement document)");
    sub->add_option("--mu", opt.mu, "deformation of N (relement document)");
    sub->add_option("--samples", opt.samples, "random stability samples of the attracting cell");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }
  CLI::App* sub = app.get_subcommands().front();
  std::vector<std::string> args(argv + 1, argv + argc);
  Context cx(sub->get_name(), opt, args, out, err);
  try {
    return by_app.at(sub)->fn(cx);
  } catch (const Undecided& e) {
    err << "warning: undecided: " << e.what() << "\n";
    return undecided;
  } catch (const VerificationFailed& e) {
    err << "verification failed: " << e.what() << "\n";
    return verification_failed;
  } catch (const HypothesisFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return verification_failed;
  } catch (const NoCanonicalSection& e) {
    err << "verification failed: " << e.what() << "\n";
    return verification_failed;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const NotGeneric& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace quivercells::cli
