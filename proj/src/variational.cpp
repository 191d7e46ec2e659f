#include <algorithm>

#include "diffiety/variational.hpp"
#include "diffiety/variations.hpp"

namespace diffiety {

PoincareCartanData poincare_cartan(const StandardBasis& b, const OneForm& phi) {
  const Diffiety& d = b.diffiety();
  if (!b.tau().empty())
    throw NotControllable("the residual module has rank " + std::to_string(b.tau().size()) +
                          "; the Poincare-Cartan form needs R0 = 0");
  OneForm top = reduce_two_form(d, exterior_derivative(d, phi));
  StandardExpansion e = b.expand(top, d.order_cap());

  PoincareCartanData out;
  for (std::size_t j = 0; j < b.mu(); ++j) {
    std::vector<Expr> c = e.pi[j];
    for (std::size_t s = c.size(); s-- > 1;) {
      if (c[s].is_zero()) continue;
      out.correction += c[s] * b.chain(j, static_cast<int>(s) - 1);
      c[s - 1] -= d.total_derivative(c[s]);
    }
    Expr ej = c.empty() ? Expr() : c[0];
    out.el_form += ej * b.chain(j, 0);
    out.el_coefficients.push_back(std::move(ej));
  }
  out.pc_form = phi + out.correction;
  return out;
}

PoincareCartanData poincare_cartan(const StandardBasis& b, const Expr& f) {
  return poincare_cartan(b, f * OneForm::differential(b.diffiety().x()));
}

std::vector<Expr> euler_lagrange(const StandardBasis& b, const OneForm& phi) {
  return poincare_cartan(b, phi).el_coefficients;
}

std::vector<Expr> euler_lagrange(const StandardBasis& b, const Expr& f) { return poincare_cartan(b, f).el_coefficients; }

namespace {

struct Leader {
  int decl;
  int index;
  int level;
};

std::optional<Leader> leader_of(const Diffiety& d, const Expr& e) {
  std::optional<Leader> best;
  bool tie = false;
  for (AtomId a : free_atoms(e)) {
    auto c = d.classify(a);
    if (!c || c->role != Role::Chain) continue;
    int lv = d.level(a);
    if (!best || lv > best->level) {
      best = Leader{c->decl, c->index, lv};
      tie = false;
    } else if (lv == best->level) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return best;
}

} // namespace

std::optional<Expr> reduce_on_extremals(const Diffiety& d, const std::vector<Expr>& e, const Expr& g, int order) {
  std::map<AtomId, Expr> rules;
  std::vector<AtomId> keys; // ordered by decreasing level
  for (const auto& ej : e) {
    if (ej.is_zero()) continue;
    auto lead = leader_of(d, ej);
    if (!lead) return std::nullopt;
    Expr dk = ej;
    for (int k = 0; k <= order; ++k) {
      AtomId l = d.chain_atom(lead->decl, lead->index + k);
      Expr coef = partial(dk, l);
      if (coef.is_zero() || !partial(coef, l).is_zero()) return std::nullopt;
      if (is_nonzero(coef, d.assumptions()) == NonzeroVerdict::Undecided) return std::nullopt;
      if (rules.count(l)) return std::nullopt;
      rules.emplace(l, Expr::atom(l) - dk / coef);
      keys.push_back(l);
      dk = d.total_derivative(dk);
    }
  }
  std::sort(keys.begin(), keys.end(), [&d](AtomId a, AtomId b) { return d.level(a) > d.level(b); });
  Expr r = g;
  for (bool changed = true; changed;) {
    changed = false;
    auto atoms = free_atoms(r);
    for (AtomId k : keys)
      if (std::find(atoms.begin(), atoms.end(), k) != atoms.end()) {
        r = substitute(r, {{k, rules.at(k)}});
        changed = true;
        break;
      }
  }
  return r;
}

NoetherCharge noether_charge(const StandardBasis& b, const Expr& f, const VectorField& z, int order) {
  const Diffiety& d = b.diffiety();
  VariationCheck vc = check_variation(d, z, order);
  if (!vc.ok)
    throw NotASymmetryOfTheProblem("L_Z Omega leaves Omega at " + Expr::atom(*vc.failing).str());
  OneForm phi = f * OneForm::differential(d.x());
  Expr off = evaluate_D(d, lie_derivative(d, z, phi));
  if (!off.is_zero()) throw NotASymmetryOfTheProblem("L_Z(f dx) is not in Omega: its value on D is " + off.str());

  PoincareCartanData pc = poincare_cartan(b, f);
  NoetherCharge out;
  out.charge = evaluate(pc.pc_form, z);
  Expr dq = d.total_derivative(out.charge);
  if (dq.is_zero()) {
    out.constant_on_extremals = true;
    return out;
  }
  auto reduced = reduce_on_extremals(d, pc.el_coefficients, dq, order);
  if (!reduced) {
    out.note = "the Euler-Lagrange coefficients have no solvable leading coordinates";
  } else if (reduced->is_zero()) {
    out.constant_on_extremals = true;
  } else {
    out.note = "D(charge) reduces to " + reduced->str() + " on extremals up to the order";
  }
  return out;
}

namespace {

Expr closed_form_a(const Diffiety& d, const Expr& F) {
  AtomId v0 = variable("v", 0), v1 = variable("v", 1), w = variable("w");
  return partial(F, v0) - d.total_derivative(partial(F, v1)) + partial(F, w) * partial(F, v1);
}

} // namespace

Diffiety constrained_problem(const Expr& F) {
  Diffiety d;
  d.add_chain("u");
  d.add_chain("v");
  d.add_single("w", 0, F);
  Expr a = closed_form_a(d, F);
  if (!a.is_constant()) d.assumptions().add(a);
  return d;
}

ClosedFormData closed_form_problem(const Expr& F, const Expr& f) {
  Diffiety d = constrained_problem(F);
  AtomId u0 = variable("u", 0), u1 = variable("u", 1), v0 = variable("v", 0), v1 = variable("v", 1),
         w = variable("w");
  ClosedFormData out;
  out.a = closed_form_a(d, F);
  NonzeroVerdict va = is_nonzero(out.a, d.assumptions());
  if (va == NonzeroVerdict::Zero || va == NonzeroVerdict::Undecided)
    throw DegenerateConstraint("a = " + out.a.str() + " is not certified nonzero");
  auto D = [&d](const Expr& e) { return d.total_derivative(e); };
  out.b = partial(f, v0) - D(partial(f, v1)) + partial(f, w) * partial(F, v1);
  out.A = partial(F, u0) - D(partial(F, u1)) + partial(F, w) * partial(F, u1);
  out.B = partial(f, u0) - D(partial(f, u1)) + partial(f, w) * partial(F, u1);
  Expr ba = out.b / out.a;
  out.e1 = partial(f, w) - ba * partial(F, w) - D(ba);
  out.e2 = out.B - ba * out.A;
  OneForm alpha = contact_form(d, Expr::atom(u0)), beta = contact_form(d, Expr::atom(v0)),
          gamma = contact_form(d, Expr::atom(w));
  out.pc_form = f * OneForm::differential(d.x()) + (partial(f, u1) - ba * partial(F, u1)) * alpha +
                (partial(f, v1) - ba * partial(F, v1)) * beta - ba * gamma;
  out.pc_form_consistent = out.pc_form + 2 * ba * gamma;
  out.frame = {gamma - partial(F, u1) * alpha - partial(F, v1) * beta, alpha};
  out.el_form = out.e1 * out.frame[0] + out.e2 * out.frame[1];
  return out;
}

} // namespace diffiety
