#include <algorithm>
#include <ostream>
#include <sstream>

#include "diffiety/expr.hpp"

namespace diffiety {

// ---------------------------------------------------------------------------
// Construction and arithmetic

Expr::Expr() : data_(std::make_shared<Data>(Data{Polynomial{}, Polynomial(1)})) {}

Expr::Expr(const Rational& c) : data_(std::make_shared<Data>(Data{Polynomial(c), Polynomial(1)})) {}

Expr::Expr(Polynomial p) : data_(std::make_shared<Data>(Data{std::move(p), Polynomial(1)})) {}

Expr Expr::atom(AtomId id) { return Expr(Polynomial::atom(id)); }

Expr Expr::fraction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw DegenerateExpression("division by an identically zero denominator");
  if (num.is_zero()) return Expr();
  if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
  Polynomial g = gcd(num, den);
  if (!g.is_constant()) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
  Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num = num.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  return Expr(std::shared_ptr<const Data>(std::make_shared<Data>(Data{std::move(num), std::move(den)})));
}

Expr Expr::fraction_coprime(Polynomial num, Polynomial den) {
  if (num.is_zero()) return Expr();
  if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
  Rational lc = den.leading_coefficient();
  if (lc != 1) {
    num = num.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  return Expr(std::shared_ptr<const Data>(std::make_shared<Data>(Data{std::move(num), std::move(den)})));
}

Rational Expr::constant_value() const {
  if (!is_constant()) throw std::logic_error("expression is not constant: " + str());
  return data_->num.constant_value() / data_->den.constant_value();
}

Expr Expr::operator-() const {
  auto d = std::make_shared<Data>(Data{-data_->num, data_->den});
  return Expr(std::shared_ptr<const Data>(std::move(d)));
}

Expr Expr::add(const Expr& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) return Expr(data_->num + o.data_->num);
  if (data_->den == o.data_->den) return fraction(data_->num + o.data_->num, data_->den);
  if (o.is_polynomial()) {
    // den unchanged, gcd(num + o*den, den) = gcd(num, den) = 1.
    auto d = std::make_shared<Data>(Data{data_->num + o.data_->num * data_->den, data_->den});
    return Expr(std::shared_ptr<const Data>(std::move(d)));
  }
  if (is_polynomial()) return o + *this;
  // With g = gcd(b, d), a/b + c/d = (a d' + c b') / (b' d' g) and the only
  // common factors of numerator and denominator divide g.
  const Polynomial& b = data_->den;
  const Polynomial& d = o.data_->den;
  Polynomial g = gcd(b, d);
  if (g.is_constant()) return fraction_coprime(data_->num * d + o.data_->num * b, b * d);
  Polynomial b1 = *divide_exact(b, g), d1 = *divide_exact(d, g);
  Polynomial num = data_->num * d1 + o.data_->num * b1;
  if (num.is_zero()) return Expr();
  Polynomial h = gcd(num, g);
  if (!h.is_constant()) {
    num = *divide_exact(num, h);
    g = *divide_exact(g, h);
  }
  return fraction_coprime(std::move(num), b1 * d1 * g);
}

Expr Expr::mul(const Expr& o) const {
  if (is_zero() || o.is_zero()) return Expr();
  if (is_polynomial() && o.is_polynomial()) return Expr(data_->num * o.data_->num);
  Polynomial n1 = data_->num, d1 = data_->den, n2 = o.data_->num, d2 = o.data_->den;
  Polynomial g1 = gcd(n1, d2);
  if (!g1.is_constant()) {
    n1 = *divide_exact(n1, g1);
    d2 = *divide_exact(d2, g1);
  }
  Polynomial g2 = gcd(n2, d1);
  if (!g2.is_constant()) {
    n2 = *divide_exact(n2, g2);
    d1 = *divide_exact(d1, g2);
  }
  Polynomial den = d1 * d2;
  Polynomial num = n1 * n2;
  if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
  Rational lc = den.leading_coefficient();
  auto d = std::make_shared<Data>(Data{num.scaled(1 / lc), den.scaled(1 / lc)});
  return Expr(std::shared_ptr<const Data>(std::move(d)));
}

Expr Expr::div(const Expr& o) const {
  if (o.is_zero()) throw DegenerateExpression("division by zero expression");
  if (o.is_constant()) {
    Rational c = o.constant_value();
    auto d = std::make_shared<Data>(Data{data_->num.scaled(1 / c), data_->den});
    return Expr(std::shared_ptr<const Data>(std::move(d)));
  }
  Polynomial num = o.data_->den;
  Polynomial den = o.data_->num;
  Rational lc = den.leading_coefficient();
  auto inv = std::make_shared<Data>(Data{num.scaled(1 / lc), den.scaled(1 / lc)});
  return *this * Expr(std::shared_ptr<const Data>(std::move(inv)));
}

Expr Expr::pow(int exponent) const {
  if (exponent == 0) return Expr(1);
  if (exponent < 0) return (Expr(1) / *this).pow(-exponent);
  if (exponent == 1) return *this;
  auto d = std::make_shared<Data>(Data{data_->num.pow(exponent), data_->den.pow(exponent)});
  return Expr(std::shared_ptr<const Data>(std::move(d)));
}

bool Expr::equals(const Expr& o) const {
  if (data_ == o.data_) return true;
  return data_->num == o.data_->num && data_->den == o.data_->den;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

using SortedFactors = std::vector<std::pair<AtomId, std::uint32_t>>;

SortedFactors sorted_factors(const Monomial& m) {
  SortedFactors f = m.factors();
  std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return atom_structural_less(a.first, b.first); });
  return f;
}

bool term_before(const std::pair<SortedFactors, Rational>& a, const std::pair<SortedFactors, Rational>& b) {
  std::uint32_t da = 0, db = 0;
  for (const auto& f : a.first) da += f.second;
  for (const auto& f : b.first) db += f.second;
  if (da != db) return da > db;
  std::size_t n = std::min(a.first.size(), b.first.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a.first[k].first != b.first[k].first) return atom_structural_less(a.first[k].first, b.first[k].first);
    if (a.first[k].second != b.first[k].second) return a.first[k].second > b.first[k].second;
  }
  return a.first.size() > b.first.size();
}

std::vector<std::pair<SortedFactors, Rational>> printable_terms(const Polynomial& p) {
  std::vector<std::pair<SortedFactors, Rational>> out;
  for (const auto& [m, c] : p.terms()) out.emplace_back(sorted_factors(m), c);
  std::sort(out.begin(), out.end(), term_before);
  return out;
}

std::string render(const std::vector<std::pair<SortedFactors, Rational>>& terms, const Rational& scale) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [factors, c0] : terms) {
    Rational c = c0 * scale;
    bool negative = c < 0;
    Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool any = false;
    if (factors.empty() || mag != 1) {
      os << mag.get_str();
      any = true;
    }
    for (const auto& [a, e] : factors) {
      if (any) os << "*";
      os << atom_info(a).text;
      if (e > 1) os << "^" << e;
      any = true;
    }
  }
  return os.str();
}

} // namespace

std::string Expr::str() const {
  auto num = printable_terms(data_->num);
  if (data_->den.is_constant()) return render(num, 1);
  auto den = printable_terms(data_->den);
  Rational scale = 1 / den.front().second;
  std::string n = render(num, scale);
  std::string d = render(den, scale);
  if (num.size() > 1) n = "(" + n + ")";
  bool den_atom = den.size() == 1 && den.front().first.size() == 1 && den.front().first.front().second == 1;
  if (!den_atom) d = "(" + d + ")";
  return n + "/" + d;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

// ---------------------------------------------------------------------------
// Atom queries

std::vector<AtomId> atoms(const Expr& e) {
  auto a = e.numerator().atoms();
  auto b = e.denominator().atoms();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<AtomId> free_atoms(const Expr& e) {
  std::vector<AtomId> out;
  for (AtomId a : atoms(e)) {
    const AtomInfo& info = atom_info(a);
    if (info.kind == AtomKind::Application)
      out.insert(out.end(), info.free_atoms.begin(), info.free_atoms.end());
    else
      out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool depends_on(const Expr& e, AtomId v) {
  auto f = free_atoms(e);
  return std::binary_search(f.begin(), f.end(), v);
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr partial_of_application(AtomId app, int arg /* 1-based */) {
  const AtomInfo& info = atom_info(app);
  FunctionSymbol sym = function_symbol(info.symbol);
  if (info.partials.empty() && sym.rules[arg - 1]) {
    std::map<AtomId, Expr> sigma;
    for (int k = 0; k < sym.arity; ++k) sigma.emplace(placeholder(k + 1), info.args[k]);
    return substitute(*sym.rules[arg - 1], sigma);
  }
  std::vector<int> partials = info.partials;
  partials.push_back(arg);
  return apply_partial(info.symbol, std::move(partials), info.args);
}

Expr atom_derivative(AtomId a, AtomId v) {
  if (a == v) return Expr(1);
  const AtomInfo& info = atom_info(a);
  if (info.kind != AtomKind::Application) return Expr();
  if (!std::binary_search(info.free_atoms.begin(), info.free_atoms.end(), v)) return Expr();
  Expr total;
  for (std::size_t k = 0; k < info.args.size(); ++k) {
    Expr inner = partial(info.args[k], v);
    if (inner.is_zero()) continue;
    total += partial_of_application(a, static_cast<int>(k) + 1) * inner;
  }
  return total;
}

Expr polynomial_partial(const Polynomial& p, AtomId v) {
  Expr total;
  for (AtomId a : p.atoms()) {
    Expr da = atom_derivative(a, v);
    if (da.is_zero()) continue;
    total += Expr(p.derivative(a)) * da;
  }
  return total;
}

} // namespace

Expr partial(const Expr& e, AtomId v) {
  Expr dn = polynomial_partial(e.numerator(), v);
  if (e.is_polynomial()) return dn;
  Expr dd = polynomial_partial(e.denominator(), v);
  if (dd.is_zero()) return dn / Expr(e.denominator());
  Expr num(e.numerator());
  Expr den(e.denominator());
  return (dn * den - num * dd) / (den * den);
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

namespace {

bool touches(AtomId a, const std::map<AtomId, Expr>& sigma) {
  if (sigma.count(a)) return true;
  const AtomInfo& info = atom_info(a);
  if (info.kind != AtomKind::Application) return false;
  for (AtomId f : info.free_atoms)
    if (sigma.count(f)) return true;
  return false;
}

Expr image_of(AtomId a, const std::map<AtomId, Expr>& sigma) {
  auto it = sigma.find(a);
  if (it != sigma.end()) return it->second;
  const AtomInfo& info = atom_info(a);
  std::vector<Expr> args;
  args.reserve(info.args.size());
  for (const auto& arg : info.args) args.push_back(substitute(arg, sigma));
  return apply_partial(info.symbol, info.partials, std::move(args));
}

Expr substitute_polynomial(const Polynomial& p, const std::map<AtomId, Expr>& sigma) {
  std::map<AtomId, Expr> images;
  for (AtomId a : p.atoms())
    if (touches(a, sigma)) images.emplace(a, image_of(a, sigma));
  if (images.empty()) return Expr(p);
  // Untouched part stays polynomial; only touched factors go through Expr.
  Expr total;
  Polynomial untouched;
  for (const auto& [m, c] : p.terms()) {
    Monomial kept;
    Expr factor(c);
    bool any = false;
    for (const auto& [a, e] : m.factors()) {
      auto it = images.find(a);
      if (it == images.end()) {
        kept = kept * Monomial::atom(a, e);
      } else {
        factor *= it->second.pow(static_cast<int>(e));
        any = true;
      }
    }
    if (!any)
      untouched += Polynomial::term(kept, c);
    else
      total += factor * Expr(Polynomial::term(kept, 1));
  }
  return total + Expr(untouched);
}

Rational eval_polynomial(const Polynomial& p, const std::map<AtomId, Rational>& point) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (const auto& [a, e] : m.factors()) {
      auto it = point.find(a);
      if (it == point.end()) throw MalformedInput("evaluation point misses atom " + atom_info(a).text);
      Rational v = 1;
      for (std::uint32_t k = 0; k < e; ++k) v *= it->second;
      t *= v;
    }
    total += t;
  }
  return total;
}

} // namespace

Expr substitute(const Expr& e, const std::map<AtomId, Expr>& sigma) {
  if (sigma.empty()) return e;
  Expr n = substitute_polynomial(e.numerator(), sigma);
  if (e.is_polynomial()) return n;
  Expr d = substitute_polynomial(e.denominator(), sigma);
  if (d.is_zero()) throw DegenerateExpression("denominator vanishes after substitution: " + e.str());
  return n / d;
}

Rational eval_rational(const Expr& e, const std::map<AtomId, Rational>& point) {
  Rational d = eval_polynomial(e.denominator(), point);
  if (d == 0) throw PoleAtPoint("denominator vanishes at evaluation point: " + e.str());
  return eval_polynomial(e.numerator(), point) / d;
}

// ---------------------------------------------------------------------------
// Nonvanishing verdicts

const char* to_string(NonzeroVerdict v) {
  switch (v) {
  case NonzeroVerdict::Zero: return "Zero";
  case NonzeroVerdict::NonzeroGeneric: return "NonzeroGeneric";
  case NonzeroVerdict::NonzeroByAssumption: return "NonzeroByAssumption";
  case NonzeroVerdict::Undecided: return "Undecided";
  }
  return "?";
}

void AssumptionSet::add(const Expr& e) {
  if (e.is_zero()) throw MalformedInput("cannot assume the zero expression is nonzero");
  if (e.is_constant()) return;
  for (const auto& m : members_)
    if (m == e) return;
  members_.push_back(e);
}

NonzeroVerdict is_nonzero(const Expr& e, const AssumptionSet& assumptions) {
  if (e.is_zero()) return NonzeroVerdict::Zero;
  Polynomial rest = e.numerator();
  bool used = false;
  // Removing assumed factors in any multiplicity covers products of members.
  bool progress = true;
  while (progress && !rest.is_constant()) {
    progress = false;
    for (const auto& m : assumptions.members()) {
      for (const Polynomial* f : {&m.numerator(), &m.denominator()}) {
        if (f->is_constant()) continue;
        while (!rest.is_constant()) {
          auto q = divide_exact(rest, *f);
          if (!q) break;
          rest = std::move(*q);
          used = progress = true;
        }
      }
    }
  }
  if (rest.is_constant()) return used ? NonzeroVerdict::NonzeroByAssumption : NonzeroVerdict::NonzeroGeneric;

  // A bare application factor (such as F' or a mixed partial) may vanish for
  // special choices of the function; so may an expression built only from
  // applications.
  Monomial content = rest.monomial_content();
  for (const auto& [a, exp] : content.factors())
    if (atom_info(a).kind == AtomKind::Application) return NonzeroVerdict::Undecided;
  bool any_plain = false;
  for (AtomId a : rest.atoms())
    if (atom_info(a).kind != AtomKind::Application) any_plain = true;
  if (!any_plain) return NonzeroVerdict::Undecided;
  return NonzeroVerdict::NonzeroGeneric;
}

} // namespace diffiety
