#include <algorithm>
#include <set>

#include "diffiety/standard_filtration.hpp"

namespace diffiety {

int find_L(const Diffiety& d, std::optional<int> l_cap) {
  int cap = l_cap.value_or(2 * d.max_seed_level() + 4);
  std::optional<int> from;
  FormSpan next = seed_span(d, 0);
  for (int l = 0; l <= cap; ++l) {
    FormSpan cur = next;
    next = seed_span(d, l + 1);
    if (span_equal(ker_D(next), cur)) {
      if (!from) from = l;
    } else {
      from.reset();
    }
  }
  if (!from) throw NotStabilized("Ker_D Omega_{l+1} = Omega_l does not hold up to l = " + std::to_string(cap) +
                                 "; raise the level cap");
  return *from;
}

FormSpan StandardFiltration::level(int l) const {
  if (l < 0) throw MalformedInput("negative filtration level");
  if (l <= K - 1) return kernels[static_cast<std::size_t>(K - 1 - l)];
  return seed_span(*diffiety, L + 1 + l - K);
}

StandardFiltration standard_filtration(const Diffiety& d, std::optional<int> l_cap) {
  StandardFiltration f;
  f.diffiety = std::make_shared<Diffiety>(d);
  f.L = find_L(d, l_cap);
  f.kernels.push_back(seed_span(d, f.L));
  std::size_t cap = f.kernels.front().rank() + 1;
  for (;;) {
    FormSpan k = ker_D(f.kernels.back());
    // Ker_D is contained in its argument, so equal rank means equal spans.
    if (k.rank() == f.kernels.back().rank()) break;
    f.kernels.push_back(std::move(k));
    if (f.kernels.size() > cap) throw NotStabilized("Ker_D iteration did not stabilize");
  }
  f.K = static_cast<int>(f.kernels.size()) - 1;
  return f;
}

ResidualModule residual_module(const StandardFiltration& f) {
  ResidualModule r{f.residual(), f.L, f.K, false, {}};
  r.flat = flatness_check(r.span);
  if (r.flat)
    r.potentials = exact_potentials(r.span);
  else
    r.potentials.status = "residual module is not flat";
  return r;
}

ResidualModule residual_module(const Diffiety& d, std::optional<int> l_cap) {
  return residual_module(standard_filtration(d, l_cap));
}

bool is_controllable(const Diffiety& d) { return standard_filtration(d).residual().is_zero(); }

// ---------------------------------------------------------------------------
// Potentials

namespace {

/// Monomials of total degree 1..max_degree over the atoms, each involving
/// at least one coordinate.
std::vector<Expr> candidate_monomials(const std::vector<AtomId>& atoms, const std::vector<bool>& is_coord,
                                      int max_degree) {
  std::vector<std::pair<Monomial, bool>> layer{{Monomial(), false}};
  std::vector<Expr> out;
  std::set<std::vector<Monomial::Factor>> seen;
  for (int deg = 1; deg <= max_degree; ++deg) {
    std::vector<std::pair<Monomial, bool>> next;
    for (const auto& [m, has_coord] : layer)
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        Monomial n = m * Monomial::atom(atoms[k]);
        if (!seen.insert(n.factors()).second) continue;
        bool c = has_coord || is_coord[k];
        next.emplace_back(n, c);
        if (c) out.push_back(Expr(Polynomial::term(n, 1)));
      }
    layer = std::move(next);
  }
  return out;
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  Polynomial g = gcd(a, b);
  return *divide_exact(a * b, g);
}

} // namespace

Potentials exact_potentials(const FormSpan& r, int max_degree) {
  Potentials out;
  if (r.is_zero()) {
    out.functions = std::vector<Expr>{};
    out.status = "zero span";
    return out;
  }
  const Diffiety& d = r.diffiety();
  std::set<AtomId> window;
  for (const auto& g : r.basis())
    for (const auto& [c, a] : g.terms()) {
      window.insert(c);
      for (AtomId f : free_atoms(a))
        if (d.is_coordinate(f)) window.insert(f);
    }
  std::vector<AtomId> atoms(window.begin(), window.end());
  std::sort(atoms.begin(), atoms.end(), [&d](AtomId a, AtomId b) {
    if (d.column_less(a, b)) return true;
    if (d.column_less(b, a)) return false;
    return atom_structural_less(a, b);
  });
  std::vector<bool> is_coord;
  for (AtomId a : atoms) {
    auto c = d.classify(a);
    is_coord.push_back(c && c->role != Role::Parameter);
  }
  std::vector<Expr> monomials = candidate_monomials(atoms, is_coord, max_degree);

  // Linear conditions on rational coefficients a_m: sum a_m (dm mod r) = 0.
  std::vector<OneForm> rems;
  for (const auto& m : monomials) rems.push_back(r.reduce(differential(d, m)).remainder);
  std::set<AtomId> cols;
  for (const auto& f : rems)
    for (const auto& [c, a] : f.terms()) cols.insert(c);
  std::map<std::pair<AtomId, std::vector<Monomial::Factor>>, std::size_t> key_index;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> entries(monomials.size());
  for (AtomId c : cols) {
    Polynomial common(1);
    for (const auto& f : rems) common = lcm(common, f.coefficient(c).denominator());
    for (std::size_t i = 0; i < rems.size(); ++i) {
      Expr a = rems[i].coefficient(c);
      if (a.is_zero()) continue;
      Polynomial scaled = a.numerator() * *divide_exact(common, a.denominator());
      for (const auto& [m, coef] : scaled.terms()) {
        auto key = std::make_pair(c, m.factors());
        auto it = key_index.try_emplace(key, key_index.size()).first;
        entries[i].emplace_back(it->second, coef);
      }
    }
  }
  Eigen::Index neq = static_cast<Eigen::Index>(key_index.size());
  Echelon<Rational> ech(neq);
  std::vector<Echelon<Rational>::Vector> rows;
  for (const auto& e : entries) {
    Echelon<Rational>::Vector v = Echelon<Rational>::Vector::Constant(1, neq, Rational(0));
    for (const auto& [k, coef] : e) v(static_cast<Eigen::Index>(k)) += coef;
    rows.push_back(std::move(v));
  }
  std::vector<Expr> found;
  std::vector<OneForm> dfound;
  for (const auto& relation : ech.insert_all(rows)) {
    if (!relation) continue;
    Expr g;
    for (Eigen::Index i = 0; i < relation->size(); ++i)
      if ((*relation)(i) != 0) g += Expr((*relation)(i)) * monomials[static_cast<std::size_t>(i)];
    OneForm dg = differential(d, g);
    std::vector<OneForm> trial = dfound;
    trial.push_back(dg);
    if (FormSpan(d, trial).rank() == trial.size()) {
      found.push_back(g);
      dfound.push_back(dg);
    }
    if (found.size() == r.rank()) break;
  }
  if (found.size() == r.rank()) {
    out.functions = found;
    out.status = "found";
  } else {
    out.status = "potentials not found syntactically";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard basis

StandardBasis::StandardBasis(StandardFiltration filtration, std::vector<OneForm> tau, std::vector<InitialForm> initial)
    : filtration_(std::move(filtration)), tau_(std::move(tau)), initial_(std::move(initial)) {}

DiffietyStats StandardBasis::stats() const {
  DiffietyStats s;
  s.mu = static_cast<int>(initial_.size());
  s.dim_r0 = static_cast<int>(tau_.size());
  s.L = filtration_.L;
  s.K = filtration_.K;
  s.nu = s.mu == 0 ? -1 : 0;
  return s;
}

OneForm StandardBasis::chain(std::size_t j, int s) const {
  if (j >= initial_.size() || s < 0) throw MalformedInput("no such chain form");
  if (s == 0) return initial_[j].form;
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->chains.find({j, s});
    if (it != cache_->chains.end()) return it->second;
  }
  OneForm f = lie_derivative_D(diffiety(), chain(j, s - 1));
  std::lock_guard lock(cache_->mutex);
  cache_->chains.emplace(std::make_pair(j, s), f);
  return f;
}

const FormSpan& StandardBasis::cobasis_span(int level) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->cobases.find(level);
    if (it != cache_->cobases.end()) return it->second;
  }
  std::vector<OneForm> gens{OneForm::differential(diffiety().x())};
  gens.insert(gens.end(), tau_.begin(), tau_.end());
  for (std::size_t j = 0; j < initial_.size(); ++j)
    for (int s = 0; initial_[j].entry_level + s <= level; ++s) gens.push_back(chain(j, s));
  FormSpan span(diffiety(), std::move(gens));
  std::lock_guard lock(cache_->mutex);
  return cache_->cobases.emplace(level, std::move(span)).first->second;
}

std::vector<OneForm> StandardBasis::forms_up_to(int order) const {
  std::vector<OneForm> out = tau_;
  for (std::size_t j = 0; j < initial_.size(); ++j)
    for (int s = 0; s <= order; ++s) out.push_back(chain(j, s));
  return out;
}

StandardExpansion StandardBasis::expand(const OneForm& theta, int order) const {
  const Diffiety& d = diffiety();
  OneForm contact = theta - evaluate_D(d, theta) * OneForm::differential(d.x());
  // Smallest filtration level holding the contact part bounds the chains used.
  int level = 0;
  for (int cap = std::max(order, 0) + filtration_.K + d.max_seed_level() + 1; !filtration_.level(level).contains(contact);) {
    if (++level > cap)
      throw TruncationOverflow("form is not spanned by the standard basis up to order " + std::to_string(order));
  }
  std::vector<int> top(initial_.size(), -1);
  for (std::size_t j = 0; j < initial_.size(); ++j) {
    top[j] = level - initial_[j].entry_level;
    if (top[j] > order)
      throw TruncationOverflow("form needs pi^" + std::to_string(j + 1) + "_" + std::to_string(top[j]) +
                               ", beyond order " + std::to_string(order));
  }
  auto coeffs = cobasis_span(level).expand(theta);
  if (!coeffs)
    throw TruncationOverflow("form is not spanned by the standard basis up to order " + std::to_string(order));
  StandardExpansion e;
  e.dx = (*coeffs)[0];
  std::size_t k = 1;
  for (std::size_t r = 0; r < tau_.size(); ++r) e.tau.push_back((*coeffs)[k++]);
  e.pi.resize(initial_.size());
  for (std::size_t j = 0; j < initial_.size(); ++j)
    for (int s = 0; s <= order; ++s) e.pi[j].push_back(s <= top[j] ? (*coeffs)[k++] : Expr());
  return e;
}

StandardBasis standard_basis(const StandardFiltration& f) {
  const Diffiety& d = *f.diffiety;
  std::vector<OneForm> tau = f.residual().basis();
  std::vector<InitialForm> initial;
  StandardBasis probe(f, tau, initial);

  // Once the seed filtration is generated by L_D, no level adds initial forms.
  int last = f.K + d.max_seed_level() + std::max(d.shift(), 0) + 2;
  FiltrationCheck good = check_good_filtration(d, std::max(1, 2 * d.max_seed_level() + 4));
  if (good.good && good.equality_from) last = std::max({0, f.K - 1, *good.equality_from + f.K - f.L - 1});
  for (int l = 0; l <= last; ++l) {
    FormSpan target = f.level(l);
    std::vector<OneForm> existing = tau;
    for (std::size_t j = 0; j < initial.size(); ++j)
      for (int s = 0; initial[j].entry_level + s <= l; ++s) existing.push_back(probe.chain(j, s));
    FormSpan have(d, existing);
    if (have.rank() == target.rank()) continue;
    auto have_pivots = have.pivot_coordinates();
    auto tp = target.pivot_coordinates();
    auto is_new = [&](std::size_t i) {
      return std::find(have_pivots.begin(), have_pivots.end(), tp[i]) == have_pivots.end();
    };
    std::vector<std::size_t> order(tp.size());
    for (std::size_t i = 0; i < tp.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (is_new(a) != is_new(b)) return is_new(a);
      return d.column_less(tp[a], tp[b]);
    });
    for (std::size_t i : order) {
      const OneForm& cand = target.basis()[i];
      if (have.contains(cand)) continue;
      initial.push_back({cand, l});
      probe = StandardBasis(f, tau, initial);
      existing.push_back(cand);
      have = FormSpan(d, existing);
      if (have.rank() == target.rank()) break;
    }
  }
  return StandardBasis(f, tau, initial);
}

StandardBasis standard_basis(const Diffiety& d, std::optional<int> l_cap) {
  return standard_basis(standard_filtration(d, l_cap));
}

} // namespace diffiety
