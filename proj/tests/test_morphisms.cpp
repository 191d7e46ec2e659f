#include "diffiety/morphisms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace diffiety;
using namespace testing_support;

namespace {

Expr chain_var(int m, int j, int s) { return m == 1 ? w(s) : var("w" + std::to_string(j + 1), s); }

MorphismSpec shift(const Diffiety& d, int m) {
  MorphismSpec spec;
  spec.X = Expr::atom(d.x());
  for (int j = 0; j < m; ++j) spec.images[d.chain_atom(j, 0)] = chain_var(m, j, 0) + chain_var(m, j, 1);
  return spec;
}

/// The subspace w^j_2 = 0: singles a^j (level 0) and b^j (level 1) with D a = b, D b = 0.
Diffiety finite_pairs(int m) {
  Diffiety d;
  for (int j = 1; j <= m; ++j) {
    std::string a = "a" + std::to_string(j), b = "b" + std::to_string(j);
    d.add_single(b, 1, Expr());
    d.add_single(a, 0, var(b));
  }
  return d;
}

} // namespace

TEST_CASE("prolongation by the recurrence") {
  Diffiety j1 = jet(1);
  MorphismSpec id{Expr::atom(j1.x()), {{atom_of(w(0)), w(0)}}, 0};
  MorphismSpec pid = prolong(j1, id, 6);
  for (int s = 0; s <= 6; ++s) CHECK(pid.images.at(atom_of(w(s))) == w(s));

  for (int m = 1; m <= 3; ++m) {
    Diffiety d = jet(m);
    MorphismSpec p = prolong(d, shift(d, m), 5);
    for (int j = 0; j < m; ++j)
      for (int s = 0; s <= 5; ++s) CHECK(p.images.at(d.chain_atom(j, s)) == chain_var(m, j, s) + chain_var(m, j, s + 1));
  }

  MorphismSpec hodograph{w(0), {{atom_of(w(0)), Expr::atom(j1.x())}}, 0};
  CHECK_THROWS_AS(prolong(j1, hodograph, 2), SingularJacobian);
  Diffiety assumed = jet(1);
  assumed.assumptions().add(w(1));
  MorphismSpec ph = prolong(assumed, hodograph, 2);
  CHECK(ph.images.at(atom_of(w(1))) == Expr(1) / w(1));
  CHECK(ph.images.at(atom_of(w(2))) == -w(2) / w(1).pow(3));
  CHECK(is_morphism(assumed, ph, 1));

  MorphismSpec zero{Expr(), {{atom_of(w(0)), w(0)}}, 0};
  CHECK_THROWS_AS(prolong(j1, zero, 2), SingularJacobian);
  CHECK_THROWS_AS(prolong(j1, MorphismSpec{Expr::atom(j1.x()), {}, 0}, 2), MalformedInput);
}

TEST_CASE("recurrence soundness") {
  Diffiety d = jet(2);
  MorphismSpec p = prolong(d, shift(d, 2), 6);
  Expr dX = d.total_derivative(p.X);
  for (int j = 0; j < 2; ++j)
    for (int s = 0; s < 6; ++s)
      CHECK(p.images.at(d.chain_atom(j, s + 1)) * dX == d.total_derivative(p.images.at(d.chain_atom(j, s))));
}

TEST_CASE("morphism verification") {
  Diffiety j1 = jet(1);
  MorphismSpec id = prolong(j1, {Expr::atom(j1.x()), {{atom_of(w(0)), w(0)}}, 0}, 8);
  CHECK(is_morphism(j1, id, 6));

  Diffiety j2 = jet(2);
  CHECK(is_morphism(j2, prolong(j2, shift(j2, 2), 9), 8));

  MorphismSpec bad{Expr::atom(j1.x()), {{atom_of(w(0)), w(1)}, {atom_of(w(1)), w(0) * w(3)}}, 1};
  bad = prolong(j1, bad, 4);
  MorphismCheck c = check_morphism(j1, bad, 3);
  CHECK_FALSE(c.ok);
  REQUIRE(c.failing);
  CHECK(*c.failing == atom_of(w(0)));
  CHECK_FALSE(c.remainder.is_zero());

  MorphismSpec shallow = shift(j1, 1);
  CHECK_THROWS_AS(check_morphism(j1, shallow, 1), TruncationOverflow);
}

TEST_CASE("composition") {
  Diffiety d = jet(1);
  MorphismSpec m = prolong(d, shift(d, 1), 6);
  MorphismSpec sq = compose(d, m, m);
  CHECK(sq.X == Expr::atom(d.x()));
  CHECK(sq.order == 5);
  for (int s = 0; s <= 5; ++s) CHECK(sq.images.at(atom_of(w(s))) == w(s) + 2 * w(s + 1) + w(s + 2));
  MorphismSpec direct = prolong(d, {Expr::atom(d.x()), {{atom_of(w(0)), w(0) + 2 * w(1) + w(2)}}, 0}, 5);
  for (int s = 0; s <= 5; ++s) CHECK(direct.images.at(atom_of(w(s))) == sq.images.at(atom_of(w(s))));

  // (m2 o m1)* = m1* o m2* with a non-commuting pair.
  MorphismSpec scale = prolong(d, {Expr::atom(d.x()), {{atom_of(w(0)), 3 * w(0)}}, 0}, 6);
  MorphismSpec tr = prolong(d, {Expr::atom(d.x()) + 1, {{atom_of(w(0)), w(0) + Expr::atom(d.x())}}, 0}, 6);
  MorphismSpec a = compose(d, scale, tr), b = compose(d, tr, scale);
  CHECK(a.images.at(atom_of(w(0))) == 3 * w(0) + 3 * Expr::atom(d.x()));
  CHECK(b.images.at(atom_of(w(0))) == 3 * w(0) + Expr::atom(d.x()));
}

TEST_CASE("symmetry criterion") {
  SUBCASE("identity on the example diffieties") {
    std::vector<Diffiety> ds{jet(1), jet(2), finite_one(), monge_const()};
    for (const auto& d : ds) {
      StandardBasis b = standard_basis(d);
      MorphismSpec id{Expr::atom(d.x()), {}, 0};
      for (std::size_t i = 0; i < d.singles().size(); ++i) {
        AtomId a = d.single_atom(static_cast<int>(i));
        id.images[a] = Expr::atom(a);
      }
      for (std::size_t j = 0; j < d.chains().size(); ++j) {
        AtomId a = d.chain_atom(static_cast<int>(j), 0);
        id.images[a] = Expr::atom(a);
      }
      SymmetryReport r = symmetry_criterion(b, id, 0);
      CHECK(r.residual_ok);
      CHECK(r.verified());
    }
  }
  SUBCASE("shift is not verified on the jet space") {
    Diffiety d = jet(2);
    StandardBasis b = standard_basis(d);
    for (int k = 0; k <= 4; ++k) {
      SymmetryReport r = symmetry_criterion(b, shift(d, 2), k);
      CHECK(r.residual_ok);
      CHECK(r.verified_to == k);
      CHECK_FALSE(r.verified());
    }
  }
  SUBCASE("restriction to the finite diffiety is a symmetry") {
    Diffiety d = finite_pairs(2);
    StandardBasis b = standard_basis(d);
    CHECK(b.mu() == 0);
    MorphismSpec m{Expr::atom(d.x()), {}, 0};
    m.images[atom_of(var("a1"))] = var("a1") + var("b1");
    m.images[atom_of(var("b1"))] = var("b1");
    m.images[atom_of(var("a2"))] = var("a2") + var("b2");
    m.images[atom_of(var("b2"))] = var("b2");
    CHECK(is_morphism(d, m, 2));
    CHECK(symmetry_criterion(b, m, 3).verified());
  }
}

TEST_CASE("wave construction verifier") {
  Diffiety plain = wave_space(1, false), barred = wave_space(1, true);
  Expr x = Expr::atom(plain.x()), xb = Expr::atom(barred.x());
  Expr w0 = var("w", 0), w1 = var("w", 1), wb0 = var("wbar", 0), wb1 = var("wbar", 1);
  WaveData leg;
  leg.V = wb0 + w0 - x * xb;
  leg.m = 1;
  leg.forward = {{barred.x(), w1}, {atom_of(wb0), x * w1 - w0}};
  leg.backward = {{plain.x(), wb1}, {atom_of(w0), xb * wb1 - wb0}};
  WaveReport r = wave_check(leg);
  REQUIRE(r.identities.size() == 4);
  CHECK(r.all_hold());
  CHECK(r.identities[1].label == "D^1 V");
  CHECK(r.forward_jacobian_nonzero);
  CHECK(r.backward_jacobian_nonzero);

  WaveData trivial;
  trivial.V = xb - x;
  trivial.forward = {{barred.x(), x}, {atom_of(wb0), w0}};
  trivial.backward = {{plain.x(), xb}, {atom_of(w0), wb0}};
  WaveReport t = wave_check(trivial);
  CHECK(t.identities[0].holds);
  CHECK_FALSE(t.identities[1].holds);
  CHECK(t.identities[1].residual == Expr(-1));
  CHECK_FALSE(t.all_hold());

  CHECK_THROWS_AS(wave_check(WaveData{Expr(), 0, {}, {}}), MalformedInput);
}
