#pragma once

#include <random>
#include <string>

#include "diffiety/form_span.hpp"
#include "diffiety/syntax.hpp"

namespace testing_support {

using namespace diffiety;

inline Expr u(int s) { return var("u", s); }
inline Expr v(int s) { return var("v", s); }
inline Expr w(int s) { return var("w", s); }
inline AtomId atom_of(const Expr& e) { return e.numerator().leading_monomial().factors().front().first; }

/// Jet diffiety with chains w1..wm (m = 1 uses the single chain w).
inline Diffiety jet(int m, const std::string& base = "w") {
  Diffiety d;
  if (m == 1)
    d.add_chain(base);
  else
    for (int j = 1; j <= m; ++j) d.add_chain(base + std::to_string(j));
  return d;
}

struct Monge {
  Diffiety d;
  SymbolId f;
  Expr F, Fu, Fv;
};

/// dw/dx = F(u1, v1) with an opaque F.
inline Monge monge() {
  Monge m;
  m.f = register_function("F", 2);
  m.d.add_chain("u");
  m.d.add_chain("v");
  m.F = apply(m.f, {u(1), v(1)});
  m.Fu = apply_partial(m.f, {1}, {u(1), v(1)});
  m.Fv = apply_partial(m.f, {2}, {u(1), v(1)});
  m.d.add_single("w", 0, m.F);
  return m;
}

/// Monge with F replaced by the constant parameter c.
inline Diffiety monge_const() {
  Diffiety d;
  d.add_chain("u");
  d.add_chain("v");
  d.add_parameter("c");
  d.add_single("w", 0, var("c"));
  return d;
}

struct HilbertCartan {
  Diffiety d;
  SymbolId f;
  Expr F, Fp;
};

/// u'' = F(v') with F' assumed nonzero; u0, u1 are singles of levels 0, 1.
inline HilbertCartan hilbert_cartan() {
  HilbertCartan h;
  h.f = register_function("F", 1);
  h.d.add_chain("v");
  h.F = apply(h.f, {v(1)});
  h.Fp = apply_partial(h.f, {1}, {v(1)});
  h.d.add_single("u0", 0);
  h.d.add_single("u1", 1);
  h.d.set_single_derivative("u0", var("u1"));
  h.d.set_single_derivative("u1", h.F);
  h.d.assumptions().add(h.Fp);
  return h;
}

/// Finite diffiety with D w0 = w1, D w1 = 0.
inline Diffiety finite_one() {
  Diffiety d;
  d.add_single("w1", 1, Expr());
  d.add_single("w0", 0, var("w1"));
  return d;
}

inline OneForm cf(const Diffiety& d, const Expr& f) { return contact_form(d, f); }

/// Random polynomial in the given atoms with small integer coefficients.
inline Expr random_polynomial(std::mt19937& rng, const std::vector<Expr>& atoms, int terms, int max_degree = 2) {
  std::uniform_int_distribution<int> coef(-3, 3), pick(0, static_cast<int>(atoms.size()) - 1), deg(0, max_degree);
  Expr p = coef(rng);
  for (int t = 0; t < terms; ++t) {
    Expr m = coef(rng);
    for (int k = 0; k < 2; ++k) m *= atoms[pick(rng)].pow(deg(rng));
    p += m;
  }
  return p;
}

} // namespace testing_support
