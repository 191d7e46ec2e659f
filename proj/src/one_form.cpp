#include <algorithm>
#include <sstream>

#include "diffiety/one_form.hpp"

namespace diffiety {

// ---------------------------------------------------------------------------
// OneForm

OneForm OneForm::term(AtomId c, const Expr& a) {
  OneForm t;
  t.add(c, a);
  return t;
}

Expr OneForm::coefficient(AtomId c) const {
  auto it = terms_.find(c);
  return it == terms_.end() ? Expr() : it->second;
}

void OneForm::add(AtomId c, const Expr& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(c, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OneForm OneForm::operator+(const OneForm& o) const {
  OneForm r = *this;
  r += o;
  return r;
}

OneForm OneForm::operator-(const OneForm& o) const {
  OneForm r = *this;
  r -= o;
  return r;
}

OneForm OneForm::operator-() const {
  OneForm r;
  for (const auto& [c, a] : terms_) r.terms_.emplace(c, -a);
  return r;
}

OneForm& OneForm::operator+=(const OneForm& o) {
  for (const auto& [c, a] : o.terms_) add(c, a);
  return *this;
}

OneForm& OneForm::operator-=(const OneForm& o) {
  for (const auto& [c, a] : o.terms_) add(c, -a);
  return *this;
}

OneForm operator*(const Expr& f, const OneForm& t) {
  OneForm r;
  if (f.is_zero()) return r;
  for (const auto& [c, a] : t.terms_) r.add(c, f * a);
  return r;
}

std::string OneForm::str(const Diffiety& d) const {
  if (terms_.empty()) return "0";
  std::vector<AtomId> keys;
  for (const auto& [c, a] : terms_) keys.push_back(c);
  std::sort(keys.begin(), keys.end(), [&d](AtomId a, AtomId b) {
    if (d.column_less(a, b)) return true;
    if (d.column_less(b, a)) return false;
    return atom_structural_less(a, b);
  });
  std::ostringstream os;
  bool first = true;
  for (AtomId c : keys) {
    const Expr& a = terms_.at(c);
    std::string s = a.str();
    bool compound = a.numerator().size() > 1 && a.is_polynomial();
    if (!first) os << " + ";
    first = false;
    if (a == Expr(1))
      os << "d" << atom_info(c).text;
    else
      os << (compound ? "(" + s + ")" : s) << "*d" << atom_info(c).text;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// TwoForm

void TwoForm::add(AtomId a, AtomId b, const Expr& c) {
  if (a == b || c.is_zero()) return;
  Expr v = c;
  if (b < a) {
    std::swap(a, b);
    v = -v;
  }
  auto [it, inserted] = terms_.try_emplace({a, b}, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TwoForm TwoForm::operator+(const TwoForm& o) const {
  TwoForm r = *this;
  for (const auto& [k, c] : o.terms_) r.add(k.first, k.second, c);
  return r;
}

TwoForm TwoForm::operator-(const TwoForm& o) const {
  TwoForm r = *this;
  for (const auto& [k, c] : o.terms_) r.add(k.first, k.second, -c);
  return r;
}

TwoForm operator*(const Expr& f, const TwoForm& t) {
  TwoForm r;
  for (const auto& [k, c] : t.terms_) r.add(k.first, k.second, f * c);
  return r;
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
  TwoForm r;
  for (const auto& [p, ap] : a.terms())
    for (const auto& [q, bq] : b.terms()) r.add(p, q, ap * bq);
  return r;
}

// ---------------------------------------------------------------------------
// Vector fields

void VectorField::set(AtomId c, const Expr& value) { components_[c] = value; }

Expr VectorField::component(AtomId c) const {
  auto it = components_.find(c);
  if (it != components_.end()) return it->second;
  return fallback_ ? fallback_(c) : Expr();
}

Expr VectorField::apply(const Expr& f) const {
  Expr out;
  for (AtomId a : free_atoms(f)) {
    Expr za = component(a);
    if (za.is_zero()) continue;
    out += za * partial(f, a);
  }
  return out;
}

VectorField VectorField::total_derivative(const Diffiety& d) {
  VectorField z;
  z.set_fallback([d](AtomId a) { return d.is_coordinate(a) ? d.total_derivative_of(a) : Expr(); });
  return z;
}

VectorField VectorField::coordinate(AtomId c) {
  VectorField z;
  z.set(c, Expr(1));
  return z;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

bool is_parameter(const Diffiety& d, AtomId a) {
  auto c = d.classify(a);
  return c && c->role == Role::Parameter;
}

} // namespace

OneForm differential(const Diffiety& d, const Expr& f) {
  OneForm r;
  for (AtomId a : free_atoms(f))
    if (!is_parameter(d, a)) r.add(a, partial(f, a));
  return r;
}

OneForm contact_form(const Diffiety& d, const Expr& f) {
  OneForm r = differential(d, f);
  r.add(d.x(), -d.total_derivative(f));
  return r;
}

OneForm lie_derivative_D(const Diffiety& d, const OneForm& theta) {
  OneForm r;
  for (const auto& [c, a] : theta.terms()) {
    r.add(c, d.total_derivative(a));
    Expr dc = d.total_derivative_of(c);
    if (!dc.is_constant()) r += a * differential(d, dc);
  }
  return r;
}

OneForm lie_derivative(const Diffiety& d, const VectorField& z, const OneForm& theta) {
  OneForm r;
  for (const auto& [c, a] : theta.terms()) {
    r.add(c, z.apply(a));
    Expr zc = z.component(c);
    if (!zc.is_constant()) r += a * differential(d, zc);
  }
  return r;
}

Expr evaluate(const OneForm& theta, const VectorField& z) {
  Expr out;
  for (const auto& [c, a] : theta.terms()) out += a * z.component(c);
  return out;
}

Expr evaluate_D(const Diffiety& d, const OneForm& theta) {
  Expr out;
  for (const auto& [c, a] : theta.terms()) out += a * d.total_derivative_of(c);
  return out;
}

TwoForm exterior_derivative(const Diffiety& d, const OneForm& theta) {
  TwoForm r;
  for (const auto& [c, a] : theta.terms())
    for (AtomId b : free_atoms(a))
      if (!is_parameter(d, b)) r.add(b, c, partial(a, b));
  return r;
}

OneForm contract(const VectorField& z, const TwoForm& eta) {
  OneForm r;
  for (const auto& [k, c] : eta.terms()) {
    r.add(k.second, c * z.component(k.first));
    r.add(k.first, -c * z.component(k.second));
  }
  return r;
}

OneForm reduce_two_form(const Diffiety& d, const TwoForm& eta) {
  OneForm r;
  for (const auto& [k, c] : eta.terms()) {
    r.add(k.second, -c * d.total_derivative_of(k.first));
    r.add(k.first, c * d.total_derivative_of(k.second));
  }
  return r;
}

} // namespace diffiety
