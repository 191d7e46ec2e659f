#include "diffiety/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace diffiety {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::atom(AtomId id, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(id, exponent);
  return m;
}

std::uint32_t Monomial::degree_in(AtomId id) const {
  for (const auto& [a, e] : factors_) {
    if (a == id) return e;
    if (a > id) break;
  }
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + other.factors_.size());
  auto i = factors_.begin();
  auto j = other.factors_.begin();
  while (i != factors_.end() || j != other.factors_.end()) {
    if (j == other.factors_.end() || (i != factors_.end() && i->first < j->first)) {
      r.factors_.push_back(*i++);
    } else if (i == factors_.end() || j->first < i->first) {
      r.factors_.push_back(*j++);
    } else {
      r.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return r;
}

bool Monomial::divides(const Monomial& other) const {
  auto j = other.factors_.begin();
  for (const auto& [a, e] : factors_) {
    while (j != other.factors_.end() && j->first < a) ++j;
    if (j == other.factors_.end() || j->first != a || j->second < e) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  Monomial r;
  auto i = factors_.begin();
  for (const auto& [a, e] : other.factors_) {
    while (i != factors_.end() && i->first < a) ++i;
    std::uint32_t sub = (i != factors_.end() && i->first == a) ? i->second : 0;
    assert(sub <= e);
    if (e > sub) r.factors_.emplace_back(a, e - sub);
  }
  return r;
}

Monomial Monomial::without(AtomId id) const {
  Monomial r;
  for (const auto& f : factors_)
    if (f.first != id) r.factors_.push_back(f);
  return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  auto j = b.factors_.begin();
  for (const auto& [id, e] : a.factors_) {
    while (j != b.factors_.end() && j->first < id) ++j;
    if (j != b.factors_.end() && j->first == id) r.factors_.emplace_back(id, std::min(e, j->second));
  }
  return r;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (fa[k].first != fb[k].first) return fa[k].first > fb[k].first;
    if (fa[k].second != fb[k].second) return fa[k].second < fb[k].second;
  }
  return fa.size() < fb.size();
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c).first->second.canonicalize();
}

Polynomial Polynomial::atom(AtomId id) { return term(Monomial::atom(id), 1); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.emplace(m, c).first->second.canonicalize();
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<AtomId> Polynomial::atoms() const {
  std::vector<AtomId> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors()) out.push_back(f.first);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t Polynomial::degree_in(AtomId id) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(id));
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial r = *this;
  r += other;
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  Polynomial r = *this;
  r -= other;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial r;
  if (is_zero() || other.is_zero()) return r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  Polynomial r = *this;
  for (auto& [m, v] : r.terms_) v *= c;
  return r;
}

Polynomial Polynomial::times(const Monomial& mono) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mono, c);
  return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(AtomId id) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    std::uint32_t e = m.degree_in(id);
    if (e == 0) continue;
    Monomial reduced = m.without(id) * Monomial::atom(id, e - 1);
    r.add_term(reduced, c * e);
  }
  return r;
}

std::vector<Polynomial> Polynomial::coefficients_in(AtomId id) const {
  std::vector<Polynomial> out(degree_in(id) + 1);
  for (const auto& [m, c] : terms_) out[m.degree_in(id)].add_term(m.without(id), c);
  return out;
}

Polynomial Polynomial::from_coefficients(AtomId id, const std::vector<Polynomial>& coeffs) {
  Polynomial r;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    r += coeffs[k].times(Monomial::atom(id, static_cast<std::uint32_t>(k)));
  }
  return r;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  Rational lc = leading_coefficient();
  if (lc == 1) return *this;
  return scaled(1 / lc);
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  Monomial g = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    g = Monomial::gcd(g, m);
    if (g.is_one()) break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Division and gcd

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.is_zero()) return Polynomial{};
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  // Degree bounds: every quotient term satisfies deg_v(t) <= deg_v(a) - deg_v(b).
  std::vector<std::pair<AtomId, std::uint32_t>> bound;
  for (AtomId v : a.atoms()) {
    std::uint32_t da = a.degree_in(v), db = b.degree_in(v);
    if (db > da) return std::nullopt;
    bound.emplace_back(v, da - db);
  }
  for (AtomId v : b.atoms())
    if (a.degree_in(v) == 0) return std::nullopt;
  const Monomial& lb = b.leading_monomial();
  const Rational& cb = b.leading_coefficient();
  Polynomial q;
  Polynomial r = a;
  while (!r.is_zero()) {
    const Monomial& lr = r.leading_monomial();
    if (!lb.divides(lr)) return std::nullopt;
    Monomial qm = lb.quotient_of(lr);
    for (const auto& [v, e] : qm.factors()) {
      auto it = std::lower_bound(bound.begin(), bound.end(), std::make_pair(v, 0u));
      if (it == bound.end() || it->first != v || e > it->second) return std::nullopt;
    }
    Polynomial t = Polynomial::term(qm, r.leading_coefficient() / cb);
    q += t;
    r -= t * b;
  }
  return q;
}

namespace {

Polynomial exact(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error("gcd: expected exact division");
  return *q;
}

void trim(std::vector<Polynomial>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Polynomial content_list(const std::vector<Polynomial>& coeffs) {
  Polynomial g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

Polynomial content_in(const Polynomial& p, AtomId v) { return content_list(p.coefficients_in(v)); }

/// Scales to integer coefficients with no common factor.
Polynomial integer_primitive(const Polynomial& p) {
  mpz_class l = 1, g = 0;
  for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [m, c] : p.terms()) {
    mpz_class n = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  if (g == 0) return p;
  return p.scaled(Rational(l, g));
}

Polynomial primitive_in(const Polynomial& p, AtomId v) {
  Polynomial c = content_in(p, v);
  if (c.is_constant()) return integer_primitive(p);
  return integer_primitive(exact(p, c));
}

/// Pseudo-remainder of a by b as univariate polynomials in v.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, AtomId v) {
  std::vector<Polynomial> r = a.coefficients_in(v);
  std::vector<Polynomial> bc = b.coefficients_in(v);
  trim(r);
  trim(bc);
  std::size_t db = bc.size() - 1;
  const Polynomial lcb = bc[db];
  while (!r.empty() && r.size() - 1 >= db) {
    std::size_t dr = r.size() - 1;
    Polynomial lcr = r[dr];
    std::size_t shift = dr - db;
    for (auto& c : r) c = c * lcb;
    for (std::size_t i = 0; i <= db; ++i) r[i + shift] -= lcr * bc[i];
    trim(r);
  }
  return Polynomial::from_coefficients(v, r);
}

using Univariate = std::vector<Rational>;

void trim(Univariate& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Univariate univariate_gcd(Univariate a, Univariate b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    while (a.size() >= b.size()) {
      Rational f = a.back() / b.back();
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
      a.pop_back();
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

/// Image in Q[v] with all other atoms sent to fixed pseudo-random integers.
Univariate image(const Polynomial& p, AtomId v, std::uint32_t salt) {
  Univariate out(p.degree_in(v) + 1);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    std::uint32_t e = 0;
    for (const auto& [a, k] : m.factors()) {
      if (a == v) {
        e = k;
        continue;
      }
      std::uint32_t h = (a + 1) * 2654435761u ^ salt * 40503u;
      Rational x = static_cast<long>(h % 23) + 2;
      for (std::uint32_t j = 0; j < k; ++j) t *= x;
    }
    out[e] += t;
  }
  return out;
}

/// True when deg_v gcd(a, b) is certainly zero. A trivial image gcd at a
/// point keeping both v-degrees is a proof; failure proves nothing.
bool image_gcd_trivial(const Polynomial& a, const Polynomial& b, AtomId v) {
  std::size_t da = a.degree_in(v), db = b.degree_in(v);
  for (std::uint32_t salt = 1; salt <= 3; ++salt) {
    Univariate ia = image(a, v, salt), ib = image(b, v, salt);
    if (ia.back() == 0 || ib.back() == 0 || ia.size() != da + 1 || ib.size() != db + 1) continue;
    return univariate_gcd(ia, ib).size() <= 1;
  }
  return false;
}


// Heuristic gcd by evaluation at a large integer and xi-adic reconstruction,
// on polynomials with integer coefficients. Returns nothing when it gives up.

mpz_class max_norm(const Polynomial& p) {
  mpz_class n = 0;
  for (const auto& [m, c] : p.terms()) {
    mpz_class a = abs(c.get_num());
    if (a > n) n = a;
  }
  return n;
}

mpz_class integer_content(const Polynomial& p) {
  mpz_class g = 0;
  for (const auto& [m, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  return g;
}

Polynomial evaluate_at(const Polynomial& p, AtomId x, const mpz_class& xi) {
  std::vector<mpz_class> powers{1};
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    std::uint32_t k = m.degree_in(x);
    while (powers.size() <= k) powers.push_back(powers.back() * xi);
    out.add_term(m.without(x), c * Rational(powers[k]));
  }
  return out;
}

mpz_class symmetric_mod(const mpz_class& c, const mpz_class& xi) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
  if (2 * r > xi) r -= xi;
  return r;
}

Polynomial reconstruct(Polynomial gamma, AtomId x, const mpz_class& xi) {
  Polynomial out;
  std::uint32_t i = 0;
  while (!gamma.is_zero()) {
    Polynomial g;
    for (const auto& [m, c] : gamma.terms()) {
      mpz_class r = symmetric_mod(c.get_num(), xi);
      if (r != 0) g.add_term(m, Rational(r));
    }
    out += g.times(Monomial::atom(x, i));
    gamma = (gamma - g).scaled(Rational(1) / Rational(xi));
    ++i;
    if (i > 100000) return Polynomial{};
  }
  return out;
}

std::optional<Polynomial> heuristic_gcd(const Polynomial& a, const Polynomial& b, std::size_t bit_budget) {
  if (a.is_zero() || b.is_zero()) return std::nullopt;
  mpz_class ca = integer_content(a), cb = integer_content(b), cg;
  mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  if (a.is_constant() || b.is_constant()) return Polynomial(Rational(cg));
  Polynomial pa = a.scaled(Rational(1) / Rational(ca)), pb = b.scaled(Rational(1) / Rational(cb));
  std::vector<AtomId> vars = pa.atoms();
  for (AtomId v : pb.atoms()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  AtomId x = vars.front();

  mpz_class na = max_norm(pa), nb = max_norm(pb);
  mpz_class xi = 2 * std::min(na, nb) + 29;
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::size_t bits = mpz_sizeinbase(xi.get_mpz_t(), 2) * std::max(pa.degree_in(x), pb.degree_in(x));
    if (bits > bit_budget) return std::nullopt;
    Polynomial ea = evaluate_at(pa, x, xi), eb = evaluate_at(pb, x, xi);
    if (!ea.is_zero() && !eb.is_zero()) {
      auto gamma = heuristic_gcd(ea, eb, bit_budget);
      if (!gamma) return std::nullopt;
      Polynomial h = reconstruct(*gamma, x, xi);
      if (!h.is_zero()) {
        mpz_class ch = integer_content(h);
        h = h.scaled(Rational(1) / Rational(ch));
        if (h.leading_coefficient() < 0) h = -h;
        if (divide_exact(pa, h) && divide_exact(pb, h)) return h.scaled(Rational(cg));
      }
    }
    xi = xi * 73794 / 27011;
  }
  return std::nullopt;
}

} // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b) return a.monic();

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial mg = Monomial::gcd(ma, mb);
  if (a.is_monomial() || b.is_monomial()) return Polynomial::term(mg, 1);

  Polynomial pa = ma.is_one() ? a : exact(a, Polynomial::term(ma, 1));
  Polynomial pb = mb.is_one() ? b : exact(b, Polynomial::term(mb, 1));

  // Cheap divisibility checks catch the most common case.
  if (auto q = divide_exact(pa, pb); q) return pb.monic().times(mg);
  if (auto q = divide_exact(pb, pa); q) return pa.monic().times(mg);

  // A variable present in one input only: fold the other input through the
  // coefficients, stopping as soon as the running gcd is constant.
  auto fold = [](Polynomial g, const Polynomial& p, AtomId v) {
    for (const auto& c : p.coefficients_in(v)) {
      if (c.is_zero()) continue;
      g = gcd(g, c);
      if (g.is_constant()) return Polynomial(1);
    }
    return g;
  };
  auto va = pa.atoms();
  auto vb = pb.atoms();
  for (AtomId v : va)
    if (!std::binary_search(vb.begin(), vb.end(), v)) return fold(pb, pa, v).times(mg).monic();
  for (AtomId v : vb)
    if (!std::binary_search(va.begin(), va.end(), v)) return fold(pa, pb, v).times(mg).monic();

  // Variables provably absent from the gcd are eliminated through contents.
  for (AtomId v : va)
    if (image_gcd_trivial(pa, pb, v)) {
      Polynomial g = gcd(content_in(pa, v), content_in(pb, v));
      return g.times(mg).monic();
    }

  if (auto h = heuristic_gcd(integer_primitive(pa), integer_primitive(pb), 1u << 20); h)
    return h->times(mg).monic();

  AtomId var = va.front();
  std::uint32_t best = ~0u;
  for (AtomId v : va) {
    std::uint32_t d = std::max(pa.degree_in(v), pb.degree_in(v));
    if (d < best) {
      best = d;
      var = v;
    }
  }

  Polynomial ca = content_in(pa, var);
  Polynomial cb = content_in(pb, var);
  Polynomial g = gcd(ca, cb);
  Polynomial f0 = integer_primitive(ca.is_constant() ? pa : exact(pa, ca));
  Polynomial f1 = integer_primitive(cb.is_constant() ? pb : exact(pb, cb));
  if (f0.degree_in(var) < f1.degree_in(var)) std::swap(f0, f1);

  Polynomial h;
  for (;;) {
    Polynomial r = pseudo_remainder(f0, f1, var);
    if (r.is_zero()) {
      h = f1;
      break;
    }
    if (r.degree_in(var) == 0) {
      h = Polynomial(1);
      break;
    }
    f0 = std::move(f1);
    f1 = primitive_in(r, var);
  }
  h = primitive_in(h, var);
  return (g * h).times(mg).monic();
}

} // namespace diffiety
