#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "dvr/cli.hpp"
#include "dvr/sampling.hpp"
#include "oracle/oracle.hpp"

using namespace dvr;
using namespace dvr::cli;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("dvrkit_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

Result run_on(const std::string& command, const std::string& text, std::vector<std::string> flags = {}) {
  std::vector<std::string> args{command, write_temp(command + ".dvr", text)};
  args.insert(args.end(), flags.begin(), flags.end());
  return run(args);
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

const char* kTorsionComplex =
    "field rational\n"
    "complex torsion3\n"
    "gen e0 deg 6\n"
    "gen e1 deg 1\n"
    "diff e0 = u^3*e1\n";

}  // namespace

TEST_CASE("parse a complex with mixed terms") {
  AnyDocument doc = parse_document(
      "field rational\n"
      "complex mix  # comment\n"
      "gen x0 deg 0\n"
      "gen x1 deg -2\n"
      "gen y1 deg -1\n"
      "diff y1 = 1*x0 + 2*u^1*x1\n");
  auto& d = std::get<Document<Rational>>(doc);
  REQUIRE(d.blocks.size() == 1);
  auto& C = std::get<ComplexBlock<Rational>>(d.blocks[0]).complex;
  CHECK(C.name == "mix");
  CHECK(C.size() == 3);
  CHECK(C.d(0, 2) == parse_series<Rational>("1", d.field));
  CHECK(C.d(1, 2) == parse_series<Rational>("2*u", d.field));
  CHECK(C.d(2, 2).is_exact_zero());
}

TEST_CASE("negative and parenthesised coefficients") {
  AnyDocument doc = parse_document(
      "field rational\n"
      "complex c\n"
      "gen a deg 0\n"
      "gen b deg 0\n"
      "gen c deg -1\n"
      "diff c = -a - (1/2 + u^0)*b\n");
  auto& C = std::get<ComplexBlock<Rational>>(std::get<Document<Rational>>(doc).blocks[0]).complex;
  CHECK(C.d(0, 2) == parse_series<Rational>("-1", FieldConfig::rational()));
  CHECK(C.d(1, 2) == parse_series<Rational>("-3/2", FieldConfig::rational()));
}

TEST_CASE("syntax errors carry line and column") {
  auto message = [](const std::string& text) {
    try {
      parse_document(text);
    } catch (const InputError& e) {
      return std::pair{e.line, std::string(e.what())};
    }
    return std::pair{-1, std::string()};
  };
  CHECK(message("field rational\nmatrx 2 2\n").first == 2);
  CHECK(contains(message("field rational\nmatrx 2 2\n").second, "unknown directive 'matrx'"));
  CHECK(message("field rational\nmatrix 2 2\n3 1 = u\n").first == 3);
  CHECK(message("field rational\nmatrix 1 1\n1 1 = u^\n").first == 3);
  CHECK(message("field rational\ncomplex c\ngen a deg 0\ngen a deg 2\n").first == 4);
  CHECK(contains(message("field rational\ncomplex c\ngen a deg 0\ngen a deg 2\n").second, "duplicate generator"));
  CHECK(message("field rational\ncomplex c\ngen a deg 0\ndiff a = 1*b\n").first == 4);
  CHECK(message("field rational\ncomplex c\ngen a deg 1\ngen b deg 0\ndiff b = 1*a + O(u^3)*a\n").first == 5);
  CHECK(message("matrix 1 1\nfield rational\n").first == 2);
  CHECK(message("field rational\nstep 0\n").first == 2);
  CHECK(message("field weird\n").first == 1);
  CHECK(message("field novikov grading=1\n").first == 1);
}

TEST_CASE("degree violations name the offending pair") {
  try {
    parse_document(
        "field rational\n"
        "complex bad\n"
        "gen e0 deg 0\n"
        "gen e1 deg 1\n"
        "diff e0 = u^3*e1\n");
    FAIL("accepted a degree violation");
  } catch (const InputError& e) {
    CHECK(e.line == 5);
    CHECK(contains(e.what(), "e0"));
    CHECK(contains(e.what(), "e1"));
  }
  Result r = run_on("homology",
                    "field rational\ncomplex bad\ngen e0 deg 0\ngen e1 deg 1\ndiff e0 = u^3*e1\n");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "d(e0) -> e1"));
}

TEST_CASE("map blocks check the codomain") {
  const std::string good =
      "field rational\n"
      "map\n"
      "gen v deg 0\n"
      "matrix 2 1\n"
      "1 1 = u\n"
      "2 1 = 1\n"
      "codomain shape free:[0] laurent:[] tails:[] torsion:[(2,0)]\n";
  auto doc = parse_document(good);
  auto& mb = std::get<MapBlock<Rational>>(std::get<Document<Rational>>(doc).blocks[0]);
  CHECK(mb.codomain.free_power == std::vector<int>{0});
  CHECK(mb.codomain.torsion == std::vector<std::pair<int, int>>{{2, 0}});
  CHECK(same_document(parse_document(render_document(doc)), doc));
  CHECK_THROWS_AS(parse_document("field rational\nmap\nmatrix 2 1\n1 1 = u\ncodomain shape free:[0]\n"), InputError);
  CHECK_THROWS_AS(parse_document("field rational\nmap\ngen a deg 0\ngen b deg 0\nmatrix 1 1\n1 1 = u\n"
                                 "codomain shape free:[0]\n"),
                  InputError);
  CHECK(parse_shape("shape free:[1,3] tails:[-2] torsion:[(3,1),(1,0)]").to_string() ==
        parse_shape("torsion:[(1,0),(3,1)] free:[3,1] tails:[-2]").to_string());
}

TEST_CASE("render then parse reproduces random documents") {
  std::mt19937_64 rng(7);
  Sampler s(11);
  for (int trial = 0; trial < 60; ++trial) {
    CAPTURE(trial);
    Document<Rational> d;
    d.field = FieldConfig::rational();
    if (trial % 3 == 0) {
      d.uprec = 20;
      d.uprec_set = true;
    }
    d.blocks.push_back(MatrixBlock<Rational>{s.matrix(s.integer(1, 4), s.integer(1, 4), 8), 0});
    d.blocks.push_back(ComplexBlock<Rational>{oracle::random_complex(rng).C, 0});
    auto m = oracle::random_map(rng, 3, 2, 4);
    d.blocks.push_back(MatrixBlock<Rational>{m.c, 0});
    if (trial % 2) {
      SystemBlock<Rational> sb;
      sb.rank = 2;
      for (int k = 0; k < 3; ++k) sb.steps.push_back(s.matrix(2, 2, 6));
      d.blocks.push_back(sb);
    }
    AnyDocument any = d;
    std::string text = render_document(any);
    CAPTURE(text);
    AnyDocument back = parse_document(text);
    CHECK(same_document(back, any));
    CHECK(render_document(back) == text);
  }
}

TEST_CASE("novikov documents round-trip") {
  const std::string text =
      "field novikov grading=0 tprec=6\n"
      "matrix 2 2\n"
      "1 1 = (T^(1/3) - 2*T)*u + O(u^7)\n"
      "2 2 = 3/2 + T^2*u^2\n"
      "\n"
      "complex nc\n"
      "gen a deg 1\n"
      "gen b deg 0\n"
      "diff b = (1 + T)*u^0*a\n";
  AnyDocument doc = parse_document(text);
  REQUIRE(std::holds_alternative<Document<NovikovElem>>(doc));
  auto& d = std::get<Document<NovikovElem>>(doc);
  CHECK(d.field == FieldConfig::novikov(Rational(6), 0));
  std::string rendered = render_document(doc);
  CAPTURE(rendered);
  CHECK(same_document(parse_document(rendered), doc));
  CHECK(render_document(parse_document(rendered)) == rendered);
}

TEST_CASE("snf on diag(u, u^3, u^4)") {
  Result r = run_on("snf", "field rational\nmatrix 3 3\n1 1 = u\n2 2 = u^3\n3 3 = u^4\n");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "invariant_factors: u^1 u^3 u^4"));
  CHECK(contains(r.out, "minors_check: agree"));
  CHECK(contains(r.out, "det_order: 8"));
}

TEST_CASE("filtration of c = u^3") {
  Result r = run_on("filtration", "field rational\nmatrix 1 1\n1 1 = u^3\n");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "s(t): 1 + t + t^2 + t^3"));
  CHECK(contains(r.out, "f(t): t^3"));
  CHECK(contains(r.out, "□□□"));
  CHECK(contains(r.out, "j=2  V-: K[[u]]  Vinf: u^{-1}K[[u]]  V+: u^{-1}K[[u]]/uK[[u]]"));
}

TEST_CASE("filtration of a map with a kernel") {
  Result r = run_on("filtration",
                    "field rational\nmap\ngen a deg 0\ngen b deg 0\nmatrix 1 2\n1 1 = u^2\n"
                    "codomain shape free:[0]\n");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "kernel_rank: 1"));
  CHECK(contains(r.out, "s(t): 2 + 2t + 2t^2 + 1·(t^3 + …)"));
}

TEST_CASE("homology --model all on a T_3 complex") {
  Result r = run_on("homology", kTorsionComplex, {"--model", "all", "--degmin", "-2", "--degmax", "8"});
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "W-: free:[] laurent:[] tails:[] torsion:[(3,1)]"));
  CHECK(contains(r.out, "Winf: free:[] laurent:[] tails:[] torsion:[]"));
  CHECK(contains(r.out, "W+: free:[] laurent:[] tails:[] torsion:[(3,2)]"));
  CHECK(contains(r.out, "les: exact on [-2, 8]"));
  Result one = run_on("homology", kTorsionComplex, {"--model", "plus"});
  CHECK(contains(one.out, "W+:"));
  CHECK(!contains(one.out, "W-:"));
}

TEST_CASE("json output carries the same content") {
  Result t = run_on("snf", "field rational\nmatrix 2 2\n1 1 = u\n2 2 = 0\n");
  Result j = run_on("snf", "field rational\nmatrix 2 2\n1 1 = u\n2 2 = 0\n", {"--json"});
  CHECK(t.exit_code == 0);
  CHECK(j.exit_code == 0);
  CHECK(contains(t.out, "invariant_factors: u^1 0"));
  auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["command"] == "snf");
  auto& e = parsed["sections"][0]["entries"];
  CHECK(e["invariant_factors"][0] == 1);
  CHECK(e["invariant_factors"][1].is_null());
  CHECK(e["kernel_rank"] == 1);
}

TEST_CASE("limit of a system and localisation") {
  Result r = run_on("limit",
                    "field rational\nsystem rank 2\n"
                    "step 0\nmatrix 2 2\n1 1 = 1\n2 2 = u\n"
                    "step 1\nmatrix 2 2\n1 1 = 1\n2 2 = u\n"
                    "step 2\nmatrix 2 2\n1 1 = 1\n2 2 = u\n"
                    "step 3\nmatrix 2 2\n1 1 = 1\n2 2 = u\n");
  CAPTURE(r.err);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "R_4: u^0 u^4"));
  CHECK(contains(r.out, "limit: K[[u]] ⊕ K((u))"));
  Result l = run_on("limit", "field rational\nmatrix 1 1\n1 1 = u\n", {"--k", "6"});
  CHECK(l.exit_code == 0);
  CHECK(contains(l.out, "limit: K((u))"));
}

TEST_CASE("example labs through the front end") {
  for (const char* name : {"C", "TCP1", "TCP1_TWISTED", "ONEG1", "MONOTONE_GENERIC"}) {
    CAPTURE(name);
    Result r = run({"example", name, "--seed", "5"});
    CAPTURE(r.err);
    CHECK(r.exit_code == 0);
    CHECK(!r.out.empty());
  }
  Result c = run({"example", "C", "--k", "3"});
  CHECK(contains(c.out, "s~(t): 1 + t + t^2 + t^3"));
  CHECK(contains(c.out, "death_page: 1 2 3"));
  std::string params = write_temp("c.params", "alpha = 1, 2\nbeta = 3, -1/2\n");
  Result p = run({"example", "C", "--params", params});
  CHECK(p.exit_code == 0);
  CHECK(contains(p.out, "alpha: 1, 2"));
  std::string bad = write_temp("bad.params", "alpha = 1\ncolour = red\n");
  Result b = run({"example", "C", "--params", bad});
  CHECK(b.exit_code == 1);
  CHECK(contains(b.err, "colour"));
  CHECK(run({"example", "NOPE"}).exit_code == 1);
}

TEST_CASE("spectral sequence pages") {
  Result r = run_on("ss", kTorsionComplex, {"--page", "4"});
  CHECK(r.exit_code == 0);
  // By page 4 only the W+ classes in degrees 2, 4, 6 survive.
  auto tail = r.out.substr(r.out.find("E_4:"));
  CHECK(contains(tail, "p=-2 deg=2 dim=1"));
  CHECK(contains(tail, "p=0 deg=6 dim=1"));
  CHECK(!contains(tail, "deg=1 "));
  Result s = run({"ss", "--example", "C", "--k", "2", "--model", "infty"});
  CHECK(s.exit_code == 0);
  CHECK(contains(s.out, "[model infty]"));
  CHECK(contains(s.out, "infty_higher_vanish: yes"));
}

TEST_CASE("output is deterministic") {
  for (auto args : std::vector<std::vector<std::string>>{{"example", "TCP1", "--seed", "9"},
                                                         {"example", "TCP1_TWISTED", "--seed", "4", "--json"},
                                                         {"example", "ONEG1", "--seed", "2"}}) {
    Result a = run(args), b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
  Result a = run_on("homology", kTorsionComplex, {"--degmin", "0", "--degmax", "6"});
  Result b = run_on("homology", kTorsionComplex, {"--degmin", "0", "--degmax", "6"});
  CHECK(a.out == b.out);
}

TEST_CASE("exit codes") {
  CHECK(run({}).exit_code == 1);
  CHECK(run({"frobnicate"}).exit_code == 1);
  CHECK(run({"snf", "/nonexistent/file.dvr"}).exit_code == 1);
  CHECK(run({"--help"}).exit_code == 0);
  CHECK(run_on("snf", "field rational\nmatrix 1 1\n1 1 = 1\n", {"--model", "sideways"}).exit_code == 1);
  CHECK(run_on("homology", "field rational\nmatrix 1 1\n1 1 = 1\n").exit_code == 1);
  // An unresolved entry: every coefficient below the precision is zero.
  Result p = run_on("snf", "field rational\nmatrix 1 1\n1 1 = O(u^4)\n");
  CHECK(p.exit_code == 2);
  CHECK(contains(p.err, "precision"));
}
