#include "doctest.h"
#include "support.hpp"

using namespace diffiety;
using namespace testing_support;

TEST_CASE("reduction modulo spans") {
  Monge m = monge();
  OneForm a0 = cf(m.d, u(0)), a1 = cf(m.d, u(1)), b1 = cf(m.d, v(1)), b0 = cf(m.d, v(0));
  FormSpan s(m.d, {a0, a1});
  auto cert = s.reduce(a1);
  CHECK(cert.member());
  auto coeffs = s.expand(a1);
  REQUIRE(coeffs);
  CHECK((*coeffs)[0] == Expr(0));
  CHECK((*coeffs)[1] == Expr(1));

  OneForm g = cf(m.d, var("w"));
  FormSpan ab(m.d, {a0, b0});
  CHECK(ab.reduce(g).remainder == g);

  FormSpan ones(m.d, {a1, b1});
  CHECK(ones.contains(m.Fu * a1 + m.Fv * b1));
}

TEST_CASE("certificates reconstruct their input") {
  Monge m = monge();
  std::vector<OneForm> gens{cf(m.d, var("w")), cf(m.d, u(0)) + m.F * cf(m.d, v(1)), cf(m.d, u(1))};
  FormSpan s(m.d, gens);
  OneForm theta = u(2) * gens[0] + m.Fu * gens[1] + cf(m.d, v(2));
  auto cert = s.reduce(theta);
  OneForm rebuilt = cert.remainder;
  for (std::size_t i = 0; i < cert.coefficients.size(); ++i) rebuilt += cert.coefficients[i] * s.basis()[i];
  CHECK(rebuilt == theta);
  CHECK(cert.remainder == cf(m.d, v(2)));
}

TEST_CASE("Ker_D examples") {
  Diffiety j = jet(1);
  FormSpan t(j, {cf(j, w(0)), cf(j, w(1))});
  CHECK(span_equal(ker_D(t), FormSpan(j, {cf(j, w(0))})));

  Diffiety f = finite_one();
  FormSpan tf(f, {cf(f, var("w0")), cf(f, var("w1"))});
  CHECK(span_equal(ker_D(tf), tf));

  Monge m = monge();
  CHECK(ker_D(FormSpan(m.d, {cf(m.d, var("w"))})).is_zero());
}

TEST_CASE("span equality") {
  Diffiety j = jet(1);
  OneForm a0 = cf(j, w(0)), a1 = cf(j, w(1));
  CHECK(span_equal(FormSpan(j, {a0, a1}), FormSpan(j, {a0 + a1, a1})));
  Monge m = monge();
  CHECK_FALSE(span_equal(FormSpan(m.d, {cf(m.d, u(0))}), FormSpan(m.d, {cf(m.d, v(0))})));
}

TEST_CASE("flatness") {
  Diffiety j = jet(2);
  CHECK(flatness_check(FormSpan(j, {OneForm::differential(atom_of(var("w1", 1)))})));
  Diffiety f = finite_one();
  CHECK(flatness_check(FormSpan(f, {cf(f, var("w0")), cf(f, var("w1"))})));
  Diffiety j1 = jet(1);
  CHECK_FALSE(flatness_check(FormSpan(j1, {cf(j1, w(0))})));
}

TEST_CASE("undecided pivots abort") {
  SymbolId g = register_function("G", 1);
  Diffiety d = jet(1);
  Expr gp = apply_partial(g, {1}, {w(1)});
  CHECK_THROWS_AS(FormSpan(d, {gp * OneForm::differential(atom_of(w(0)))}), UndecidedPivot);
  d.assumptions().add(gp);
  CHECK(FormSpan(d, {gp * OneForm::differential(atom_of(w(0)))}).rank() == 1);
}

TEST_CASE("Ker_D is invariant under rescaling D") {
  Monge m = monge();
  m.d.assumptions().add(u(1));
  FormSpan s(m.d, {cf(m.d, var("w")), cf(m.d, u(0)), cf(m.d, u(1)), cf(m.d, v(0)), cf(m.d, v(1))});
  FormSpan k = ker_D(s);
  CHECK(span_equal(k, FormSpan(m.d, {cf(m.d, var("w")), cf(m.d, u(0)), cf(m.d, v(0))})));
  VectorField gd = VectorField::total_derivative(m.d);
  Expr g = u(1) * u(1) + 1;
  VectorField scaled;
  scaled.set_fallback([gd, g](AtomId a) { return g * gd.component(a); });
  CHECK(span_equal(ker_along(s, scaled), k));
}
