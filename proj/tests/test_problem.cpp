#include "diffiety/problem.hpp"
#include "diffiety/variational.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace diffiety;
using namespace testing_support;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

} // namespace

TEST_CASE("fixtures reproduce the hand-built diffieties") {
  ProblemFile m = load_problem(fixture("monge.dfy"));
  DiffietyStats s = standard_basis(m.diffiety).stats();
  CHECK(s.mu == 2);
  CHECK(s.dim_r0 == 0);
  Expr F = m.parse("F(u[1],v[1])");
  CHECK(m.diffiety.total_derivative(var("w")) == F);

  ProblemFile h = load_problem(fixture("hilbert_cartan.dfy"));
  CHECK(h.diffiety.total_derivative(var("u1")) == h.parse("F(v[1])"));
  CHECK(is_nonzero(h.parse("dF[1](v[1])"), h.diffiety.assumptions()) == NonzeroVerdict::NonzeroByAssumption);
  CHECK(standard_basis(h.diffiety).stats().mu == 1);

  ProblemFile hs = load_problem(fixture("hilbert_cartan_sqrt.dfy"));
  Expr S = hs.parse("S(v[1])");
  CHECK(hs.diffiety.total_derivative(S) == S * v(2) / (2 * v(1)));
  CHECK(standard_basis(hs.diffiety).stats().mu == 1);

  ProblemFile c = load_problem(fixture("monge_const.dfy"));
  CHECK_FALSE(is_controllable(c.diffiety));

  ProblemFile j = load_problem(fixture("jet1.dfy"));
  CHECK(euler_lagrange(standard_basis(j.diffiety), j.named.at("lagrangian"))[0] == -u(2));
}

TEST_CASE("the constrained fixture assumes a") {
  ProblemFile p = load_problem(fixture("constrained.dfy"));
  ClosedFormData cf = closed_form_problem(p.named.at("constraint"), p.named.at("lagrangian"));
  CHECK(cf.a == p.named.at("a"));
}

TEST_CASE("grammar details") {
  ProblemFile p = parse_problem("[independent]\r\nt\r\n[chain]\r\nq offset=1  # comment\r\n[function] G arity=1 derivative(1)=2*#1\r\n"
                                "[named]\r\nk = G(q[0]) + t\r\n[filtration]\r\nlift=1\r\nmax_level=6\r\n");
  CHECK(p.diffiety.independent_name() == "t");
  CHECK(p.lift == 1);
  CHECK(p.max_level == 6);
  CHECK(p.diffiety.level(atom_of(var("q", 2))) == 3);
  Expr k = p.named.at("k");
  CHECK(partial(k, atom_of(var("q", 0))) == 2 * var("q", 0));
  CHECK(p.lifted().shift() == 1);
}

TEST_CASE("problem file errors") {
  CHECK_THROWS_WITH_AS(parse_problem(""), doctest::Contains("no independent variable declared"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[chain] u\n[coordinate] u level=0"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[chain] u colour=2"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[widgets] u"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[coordinate] w level=0 deriv=q[1]"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[independent] y"), ParseError);
  CHECK_THROWS_AS(parse_problem("x"), ParseError);
  CHECK_THROWS_AS(parse_problem("[independent] x\n[coordinate] w deriv=1"), ParseError);
  try {
    parse_problem("[independent] x\n[chain] u\n[coordinate] w level=0 deriv=u[1] + zz");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column > 20);
  }
}

TEST_CASE("morphism and wave files") {
  ProblemFile j = load_problem(fixture("jet2.dfy"));
  MorphismSpec m = parse_morphism(j, read_text_file(fixture("shift2.morph")));
  CHECK(m.images.size() == 2);
  CHECK(is_morphism(j.diffiety, prolong(j.diffiety, m, 9), 8));
  CHECK_THROWS_AS(parse_morphism(j, "w1[0] = w1[1]"), ParseError);
  CHECK_THROWS_AS(parse_morphism(j, "X = x\nzz = 1"), ParseError);

  WaveData w = parse_wave(read_text_file(fixture("legendre.wave")));
  CHECK(w.m == 1);
  CHECK(wave_check(w).all_hold());
  CHECK_FALSE(wave_check(parse_wave(read_text_file(fixture("trivial.wave")))).all_hold());
  CHECK_THROWS_AS(parse_wave("V = x"), ParseError);
}
