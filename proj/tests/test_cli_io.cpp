#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "quivercells/cli.hpp"

using namespace quivercells;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(QUIVERCELLS_DATA_DIR) + "/" + name; }

fs::path scratch() {
  auto d = fs::temp_directory_path() / "quivercells_cli_test";
  fs::create_directories(d);
  return d;
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "quivercells");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string error_of(const std::string& text) {
  try {
    auto d = parse_document(text);
    representation_from_json(Rationals{}, d.payload);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* t1_doc = R"({"schema_version":"1","kind":"representation","payload":{
  "quiver":{"vertices":["0","1"],"arrows":[{"id":"a1","src":"0","tgt":"1"},{"id":"a2","src":"0","tgt":"1"}]},
  "field":"Q","dims":{"0":1,"1":1},"maps":{"a1":[["1"]],"a2":[["%s"]]}}})";

std::string t1_with(const std::string& entry) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, t1_doc, entry.c_str());
  return buf;
}

}  // namespace

TEST_CASE("minimal quiver document", "[cli-io]") {
  auto d = parse_document(R"({"schema_version":"1","kind":"quiver",
    "payload":{"vertices":["0","1"],"arrows":[{"id":"a","src":"0","tgt":"1"}]}})");
  CHECK(d.kind == "quiver");
  auto q = quiver_from_json(d.payload);
  CHECK(q.num_arrows() == 1);
  CHECK(q.vertices() == std::vector<std::string>{"0", "1"});
  CHECK(q.arrow(0).id == "a");
  CHECK(q.arrow(0).src == 0);
  CHECK(q.arrow(0).tgt == 1);
  CHECK(quiver_from_json(parse_document(read_file(data("kronecker1.quiver.json"))).payload) == q);
}

TEST_CASE("representation T_1 of K(2)", "[cli-io]") {
  Rationals k;
  auto m = representation_from_json(k, parse_document(read_file(data("k2_t1.rep.json"))).payload);
  CHECK(m.quiver() == quivers::kronecker(2));
  CHECK(m.dims() == DimVector{1, 1});
  CHECK(m.map(0) == Matrix<Rationals>::from_ints(k, {{1}}));
  CHECK(m.map(1) == Matrix<Rationals>::from_ints(k, {{0}}));
  CHECK(representation_from_json(k, parse_document(t1_with("0")).payload) == m);
  // fractions and integers are accepted as entries
  CHECK(representation_from_json(k, parse_document(t1_with("3/4")).payload).map(1)(0, 0) == mpq_class(3, 4));
}

TEST_CASE("parse errors name the offending path", "[cli-io]") {
  auto e = error_of(t1_with("3/0"));
  CHECK(e.find("payload.maps.a2[0][0]") != std::string::npos);
  CHECK(e.find("3/0") != std::string::npos);
  CHECK(error_of(t1_with("x")).find("payload.maps.a2[0][0]") != std::string::npos);

  std::string shape = R"({"schema_version":"1","kind":"representation","payload":{
    "quiver":{"vertices":["0","1"],"arrows":[{"id":"a","src":"0","tgt":"1"}]},
    "field":"Q","dims":{"0":1,"1":2},"maps":{"a":[["1"]]}}})";
  CHECK(error_of(shape).find("payload.maps.a") != std::string::npos);
  CHECK(error_of(shape).find("matrix shape") != std::string::npos);

  std::string unknown = R"({"schema_version":"1","kind":"representation","payload":{
    "quiver":{"vertices":["0"],"arrows":[]},"field":"Q","dims":{"0":1},"maps":{"z":[["1"]]}}})";
  CHECK(error_of(unknown).find("payload.maps.z") != std::string::npos);

  std::string bad_arrow = R"({"schema_version":"1","kind":"quiver","payload":{"vertices":["0"],"arrows":[{"id":"a","src":"0","tgt":"9"}]}})";
  try {
    quiver_from_json(parse_document(bad_arrow).payload);
    FAIL("expected a parse error");
  } catch (const ParseError& x) {
    CHECK(std::string(x.what()).find("payload.arrows[0].tgt") != std::string::npos);
  }

  CHECK(error_of(R"({"schema_version":"2","kind":"quiver","payload":{}})").find("$.schema_version") != std::string::npos);
  CHECK(error_of(R"({"schema_version":"1","kind":"matrix","payload":{}})").find("$.kind") != std::string::npos);
  CHECK(error_of(R"({"schema_version":"1","kind":"representation"})").find("$.payload") != std::string::npos);
  CHECK(error_of("{not json").find("malformed") != std::string::npos);
  std::string nofield = R"({"schema_version":"1","kind":"representation","payload":{
    "quiver":{"vertices":["0"],"arrows":[]},"dims":{"0":1}}})";
  CHECK(error_of(nofield).find("payload.field") != std::string::npos);
  std::string neg = R"({"schema_version":"1","kind":"representation","payload":{
    "quiver":{"vertices":["0"],"arrows":[]},"field":"Q","dims":{"0":-1}}})";
  CHECK(error_of(neg).find("payload.dims.0") != std::string::npos);
}

TEST_CASE("field handling when reading documents", "[cli-io]") {
  PrimeField f3(3);
  // Q documents reduce mod p
  auto m = representation_from_json(f3, parse_document(t1_with("5/2")).payload);
  CHECK(m.map(1)(0, 0) == f3.mul(f3.from_int(5), f3.inv(f3.from_int(2))));
  CHECK_THROWS_AS(representation_from_json(PrimeField(2), parse_document(t1_with("5/2")).payload), ParseError);
  // F_p documents do not lift to Q or another prime
  auto p3 = to_json(change_field(fixtures::s3_t(Rationals{}), f3));
  CHECK_THROWS_AS(representation_from_json(Rationals{}, p3), ParseError);
  CHECK_THROWS_AS(representation_from_json(PrimeField(5), p3), ParseError);
  CHECK(representation_from_json(f3, p3) == change_field(fixtures::s3_t(Rationals{}), f3));
}

TEST_CASE("documents round-trip", "[cli-io]") {
  Rationals q;
  PrimeField f3(3);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    auto quiv = fixtures::random_quiver(rng, 3, 4);
    auto d = fixtures::random_dims(rng, quiv, 3);
    auto m = fixtures::random_rep(rng, quiv, q, d);
    auto back = representation_from_json(q, parse_document(dump(make_document("representation", to_json(m)))).payload);
    CHECK(back == m);
    auto mp = change_field(m, f3);
    CHECK(representation_from_json(f3, to_json(mp)) == mp);
    CHECK(quiver_from_json(to_json(quiv)) == quiv);
    auto f = fixtures::random_relement(rng, quiv, q, d, fixtures::random_dims(rng, quiv, 2));
    auto [rq, g] = relement_from_json(q, to_json(quiv, q, f));
    CHECK(rq == quiv);
    CHECK(g == f);
  }

  auto cell = make_cell(fixtures::k22_t(q), {fixtures::k22_f(q)});
  cell.strong = Flag::verified;
  cell.certificate = {"by hand"};
  auto c2 = cell_from_json(q, to_json(cell));
  CHECK(c2.base == cell.base);
  CHECK(c2.params == cell.params);
  CHECK(c2.strong == Flag::verified);
  CHECK(c2.separating == Flag::unknown);
  CHECK(c2.certificate == cell.certificate);
  // flags do not survive reduction mod p
  CHECK(cell_from_json(f3, to_json(cell)).strong == Flag::unknown);

  auto mo = subspace_tnf(q, 4);
  auto text = dump(make_document("mosaic", to_json(mo)));
  auto mo2 = mosaic_from_json(q, parse_document(text).payload);
  REQUIRE(mo2.cells.size() == mo.cells.size());
  CHECK(mo2.provenance == mo.provenance);
  CHECK(mo2.dimvector == mo.dimvector);
  for (std::size_t i = 0; i < mo.cells.size(); ++i) {
    CHECK(mo2.cells[i].base == mo.cells[i].base);
    CHECK(mo2.cells[i].params == mo.cells[i].params);
    CHECK(mo2.cells[i].strong == mo.cells[i].strong);
  }
  // serialize after parse reproduces the text
  CHECK(dump(make_document("mosaic", to_json(mo2))) == text);

  auto cr = fixtures::att23_cover(q);
  auto cr2 = cover_rep_from_json(q, to_json(cr));
  CHECK(cr2.gamma == cr.gamma);
  CHECK(cr2.window.vertices == cr.window.vertices);
  CHECK(pushdown(cr2) == pushdown(cr));
  CHECK(weights_from_cover(cr2) == weights_from_cover(cr));
  CHECK(dump(make_document("cover_rep", to_json(cr2))) == dump(make_document("cover_rep", to_json(cr))));
}

TEST_CASE("sample documents are canonical", "[cli-io]") {
  Rationals q;
  for (const auto& entry : fs::directory_iterator(QUIVERCELLS_DATA_DIR)) {
    if (entry.path().extension() != ".json") continue;
    std::string text = read_file(entry.path().string());
    auto d = parse_document(text);
    Json again;
    if (d.kind == "quiver") again = to_json(quiver_from_json(d.payload));
    else if (d.kind == "representation") again = to_json(representation_from_json(q, d.payload));
    else if (d.kind == "relement") {
      auto [rq, f] = relement_from_json(q, d.payload);
      again = to_json(rq, q, f);
    } else if (d.kind == "cell") again = to_json(cell_from_json(q, d.payload));
    else if (d.kind == "mosaic") again = to_json(mosaic_from_json(q, d.payload));
    else if (d.kind == "cover_rep") again = to_json(cover_rep_from_json(q, d.payload));
    else continue;
    INFO(entry.path().string());
    CHECK(dump(make_document(d.kind, again)) == text);
  }
}

TEST_CASE("cover documents are validated", "[cli-io]") {
  Rationals q;
  auto j = to_json(fixtures::att23_cover(q));
  auto bad = j;
  bad["maps"][0]["tgt"] = 1;  // a cannot step between two vertices over 0
  CHECK_THROWS_AS(cover_rep_from_json(q, bad), ParseError);
  bad = j;
  bad["vertices"][0]["chi"] = Json::array({0, 0});
  CHECK_THROWS_AS(cover_rep_from_json(q, bad), ParseError);
  bad = j;
  bad["gamma"] = Json::array({1, 3});
  CHECK_THROWS_AS(cover_rep_from_json(q, bad), ParseError);
}

TEST_CASE("subspace-tnf then mosaic-verify", "[cli-io]") {
  auto path = (scratch() / "s4.json").string();
  auto r = run({"subspace-tnf", "--n", "4", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("cells: 5") != std::string::npos);
  auto v = run({"mosaic-verify", path, "--q", "2"});
  CHECK(v.code == 0);
  CHECK(v.out.find("cells: 5\n") != std::string::npos);
  CHECK(v.out.find("covered: 6\n") != std::string::npos);
  CHECK(v.out.find("total: 6\n") != std::string::npos);
  CHECK(v.out.find("multiply_covered: 0\n") != std::string::npos);
  CHECK(v.out.find("verified: yes") != std::string::npos);

  // a mosaic with a cell removed is a verification failure
  auto doc = parse_document(read_file(path));
  doc.payload["cells"].erase(doc.payload["cells"].begin() + 4);
  auto broken = (scratch() / "s4_missing.json").string();
  std::ofstream(broken) << dump(make_document("mosaic", doc.payload));
  auto b = run({"mosaic-verify", broken, "--q", "2"});
  CHECK(b.code == cli::verification_failed);
  CHECK(b.out.find("covered: 5") != std::string::npos);
}

TEST_CASE("att-cell prints the displayed patterns", "[cli-io]") {
  auto r = run({"att-cell", data("att23.cover.json"), "--q", "2", "--theta", "1,0"});
  REQUIRE(r.code == 0);
  const char* expected =
      "Att(T) = T + V_T, dim V_T = 8\n"
      "  a:\n    [1 0]\n    [* *]\n    [* *]\n"
      "  b:\n    [0 0]\n    [* 1]\n    [* *]\n"
      "  c:\n    [0 0]\n    [1 0]\n    [* 1]\n"
      "U_psi, dim 4\n"
      "  0:\n    [1 0]\n    [* 1]\n"
      "  1:\n    [1 0 0]\n    [* 1 0]\n    [* * 1]\n"
      "section, dim 4\n"
      "  a:\n    [1 0]\n    [0 *]\n    [0 *]\n"
      "  b:\n    [0 0]\n    [0 1]\n    [* *]\n"
      "  c:\n    [0 0]\n    [1 0]\n    [0 1]\n"
      "cell_dim: 4\n";
  CHECK(r.out.find(expected) != std::string::npos);
  CHECK(r.out.find("16 points, indecomposable yes, separating yes, stable yes") != std::string::npos);
  // a gamma with coinciding weights is rejected as input
  CHECK(run({"att-cell", data("att23.cover.json"), "--gamma", "1,1,1"}).code == cli::input_error);
}

TEST_CASE("poincare of the K(2,1) family", "[cli-io]") {
  auto r = run({"poincare", "--quiver", "k21", "--dims", "3,3,1", "--theta", "1,0,1", "--gamma", "1,3,1", "--window", "7"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("coefficients: [1, 0, 1, 0, 1, 0, 1]") != std::string::npos);
  auto f = run({"fixed-points", "--quiver", "k21", "--dims", "1,1,1", "--theta", "1,0,1", "--gamma", "1,3,1", "--window", "3"});
  CHECK(f.code == 0);
  CHECK(f.out.find("fixed points: 2") != std::string::npos);
}

TEST_CASE("exit codes", "[cli-io]") {
  CHECK(run({}).code == cli::input_error);
  CHECK(run({"hom", data("k2_t1.rep.json")}).code == cli::input_error);
  CHECK(run({"hom", data("k2_t1.rep.json"), "/nonexistent.json"}).code == cli::input_error);
  CHECK(run({"kac-count", "--quiver", "kronecker:2", "--dims", "2,2"}).code == cli::input_error);  // no --q
  CHECK(run({"kac-count", "--quiver", "kronecker:2", "--dims", "2,2", "--q", "4"}).code == cli::input_error);
  auto b = run({"kac-count", "--quiver", "kronecker:2", "--dims", "2,2", "--q", "3", "--budget", "10"});
  CHECK(b.code == cli::undecided);
  CHECK(b.err.find("undecided") != std::string::npos);
  auto u = run({"indec", data("k22_t.cell.json")});
  CHECK(u.code == cli::undecided);
  CHECK(u.err.find("warning") != std::string::npos);
  auto d = run({"indec", data("k22_t.cell.json"), "--q", "3"});
  CHECK(d.code == 0);
  CHECK(d.out.find("indecomposable: yes") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("module commands", "[cli-io]") {
  auto h = run({"hom", data("k2_t1.rep.json"), data("k2_t1.rep.json")});
  CHECK(h.out == "hom_dim: 1\next_dim: 1\neuler_form: 0\n");
  auto e = run({"ext-basis", data("k2_s0.rep.json"), data("k2_s1.rep.json")});
  CHECK(e.out.find("ext_dim: 2") != std::string::npos);
  CHECK(e.out.find("tree_shaped: yes") != std::string::npos);

  auto mt = run({"middle-term", data("k2_s1.rep.json"), data("k2_s0.rep.json"), data("k2_ext_a1.relement.json")});
  REQUIRE(mt.code == 0);
  auto b = representation_from_json(Rationals{}, parse_document(mt.out).payload);
  auto t1 = representation_from_json(Rationals{}, parse_document(read_file(data("k2_t1.rep.json"))).payload);
  CHECK(b == t1);
  CHECK(run({"iso", data("k2_t1.rep.json"), data("k2_s0.rep.json")}).out == "isomorphic: no\n");

  auto st = run({"stable", data("k2_t1.rep.json"), "--q", "2", "--theta", "1,0"});
  CHECK(st.out.find("stability: stable") != std::string::npos);
  auto hn = run({"hn", data("k2_t1.rep.json"), "--q", "2", "--theta", "0,1"});
  CHECK(hn.out.find("M_1: (0,1)") != std::string::npos);
  CHECK(run({"schur-level", "--quiver", "kronecker:2", "--dims", "2,2", "--q", "2"}).out == "schur_level: 2\n");

  auto sm = run({"schubert-mosaic", "--n", "4", "--d", "2", "--field", "Fp:2", "--out", (scratch() / "g.json").string()});
  CHECK(sm.out == "cells: 6\n");
  auto gv = run({"mosaic-verify", (scratch() / "g.json").string(), "--q", "2", "--shards", "3"});
  CHECK(gv.code == 0);
  CHECK(gv.out.find("total: 35") != std::string::npos);

  auto kp = run({"kac-poly", "--quiver", "subspace:4", "--dims", "2,1,1,1,1", "--primes", "2,3"});
  CHECK(kp.out.find("polynomial: q + 4") != std::string::npos);
  auto g11 = (scratch() / "g11.json").string();
  CHECK(run({"schubert-mosaic", "--n", "2", "--out", g11}).code == 0);
  auto cc = run({"crosscheck", g11, "--primes", "2,3,5"});
  CHECK(cc.code == 0);
  CHECK(cc.out.find("crosscheck: match") != std::string::npos);
}

TEST_CASE("reports are deterministic and self-describing", "[cli-io]") {
  auto a = (scratch() / "r1.json").string(), b = (scratch() / "r2.json").string();
  auto x = run({"kac-count", "--quiver", "subspace:4", "--dims", "2,1,1,1,1", "--q", "3", "--shards", "1", "--out", a});
  auto y = run({"kac-count", "--quiver", "subspace:4", "--dims", "2,1,1,1,1", "--q", "3", "--shards", "4", "--out", b});
  CHECK(x.out == y.out);
  auto ra = parse_document(read_file(a)).payload, rb = parse_document(read_file(b)).payload;
  CHECK(ra["abs_indec_classes"] == rb["abs_indec_classes"]);
  CHECK(ra["provenance"]["version"] == library_version);
  // the output path does not enter the hash; the shard count does
  auto c = (scratch() / "r3.json").string();
  run({"kac-count", "--quiver", "subspace:4", "--dims", "2,1,1,1,1", "--q", "3", "--shards", "1", "--out", c});
  CHECK(read_file(a) == read_file(c));
  CHECK(ra["provenance"]["inputs_hash"] != rb["provenance"]["inputs_hash"]);

  // input file contents enter the hash
  auto p = (scratch() / "m.json").string();
  std::ofstream(p) << read_file(data("k2_t1.rep.json"));
  run({"indec", p, "--q", "2", "--out", a});
  std::ofstream(p) << read_file(data("k2_s0.rep.json"));
  run({"indec", p, "--q", "2", "--out", b});
  CHECK(parse_document(read_file(a)).payload["provenance"]["inputs_hash"] !=
        parse_document(read_file(b)).payload["provenance"]["inputs_hash"]);
}
