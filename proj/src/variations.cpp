#include <algorithm>
#include <mutex>

#include "diffiety/variations.hpp"

namespace diffiety {

VariationCheck check_variation(const Diffiety& d, const VectorField& z, int order) {
  VariationCheck out;
  Expr dzx = d.total_derivative(z.component(d.x()));
  for (AtomId c : d.seed_coordinates(order)) {
    Expr dc = d.total_derivative_of(c);
    Expr defect = z.apply(dc) - (d.total_derivative(z.component(c)) - dc * dzx);
    if (!defect.is_zero()) {
      out.ok = false;
      out.failing = c;
      out.defect = defect;
      return out;
    }
  }
  return out;
}

bool is_variation(const Diffiety& d, const VectorField& z, int order) { return check_variation(d, z, order).ok; }

namespace {

struct ProlongState {
  Diffiety d;
  VectorField base;
  std::mutex mutex;
  std::map<AtomId, Expr> memo;
};

Expr prolonged_component(const std::shared_ptr<ProlongState>& st, AtomId a) {
  const auto& assigned = st->base.assigned();
  if (auto it = assigned.find(a); it != assigned.end()) return it->second;
  auto c = st->d.classify(a);
  if (!c || c->role != Role::Chain || c->index <= 0) return st->base.component(a);
  {
    std::lock_guard lock(st->mutex);
    if (auto it = st->memo.find(a); it != st->memo.end()) return it->second;
  }
  AtomId prev = st->d.chain_atom(c->decl, c->index - 1);
  Expr v = st->d.total_derivative(prolonged_component(st, prev)) -
           Expr::atom(a) * st->d.total_derivative(prolonged_component(st, st->d.x()));
  std::lock_guard lock(st->mutex);
  st->memo.emplace(a, v);
  return v;
}

} // namespace

VectorField prolonged(const Diffiety& d, const VectorField& z) {
  auto st = std::make_shared<ProlongState>();
  st->d = d;
  st->base = z;
  VectorField out;
  for (const auto& [c, v] : z.assigned()) out.set(c, v);
  out.set_fallback([st](AtomId a) { return prolonged_component(st, a); });
  return out;
}

Expr potential_symbol(std::size_t r) { return var("t" + std::to_string(r)); }

VectorField variation_from_spec(const StandardBasis& b, const VariationSpec& spec, int order) {
  const Diffiety& d = b.diffiety();
  if (spec.p.size() != b.mu())
    throw MalformedInput("variation spec needs " + std::to_string(b.mu()) + " p entries, got " +
                         std::to_string(spec.p.size()));

  // zr in terms of the potentials, and tau rewritten over their differentials.
  std::vector<Expr> zr;
  std::vector<std::vector<Expr>> tau_over_dt; // tau^i = sum_r M[i][r] dt^r
  bool any_zr = std::any_of(spec.zr.begin(), spec.zr.end(), [](const Expr& e) { return !e.is_zero(); });
  if (any_zr) {
    std::size_t rank = b.tau().size();
    if (rank == 0) throw MalformedInput("zr entries given but the residual module is zero");
    if (spec.zr.size() > rank)
      throw MalformedInput("zr has " + std::to_string(spec.zr.size()) + " entries, residual rank is " +
                           std::to_string(rank));
    Potentials pot = exact_potentials(b.filtration().residual());
    if (!pot.functions) throw MalformedInput("zr entries need residual potentials: " + pot.status);
    std::map<AtomId, Expr> sigma;
    for (std::size_t r = 0; r < rank; ++r) sigma.emplace(variable("t" + std::to_string(r + 1)), (*pot.functions)[r]);
    for (const auto& e : spec.zr) {
      for (AtomId a : free_atoms(e)) {
        auto c = d.classify(a);
        if (!sigma.count(a) && !(c && c->role == Role::Parameter))
          throw MalformedInput("zr entry " + e.str() + " may only use the potential symbols t1..t" +
                               std::to_string(rank));
      }
      zr.push_back(substitute(e, sigma));
    }
    zr.resize(rank);
    std::vector<OneForm> dts;
    for (const auto& t : *pot.functions) dts.push_back(differential(d, t));
    FormSpan dt_span(d, dts);
    for (const auto& tau : b.tau()) {
      auto m = dt_span.expand(tau);
      if (!m) throw std::logic_error("residual basis not spanned by potential differentials");
      tau_over_dt.push_back(*m);
    }
  }

  VectorField field;
  field.set(d.x(), spec.z);
  std::vector<std::vector<Expr>> dp(b.mu()); // dp[j][s] = D^s p^j
  for (std::size_t j = 0; j < b.mu(); ++j) dp[j].push_back(spec.p[j]);
  for (AtomId c : d.seed_coordinates(std::max(order, d.max_seed_level()))) {
    StandardExpansion e = b.expand(OneForm::differential(c), d.order_cap());
    Expr zc = spec.z.is_zero() ? Expr() : spec.z * d.total_derivative_of(c);
    for (std::size_t i = 0; any_zr && i < e.tau.size(); ++i) {
      if (e.tau[i].is_zero()) continue;
      for (std::size_t r = 0; r < zr.size(); ++r) zc += e.tau[i] * tau_over_dt[i][r] * zr[r];
    }
    for (std::size_t j = 0; j < b.mu(); ++j)
      for (std::size_t s = 0; s < e.pi[j].size(); ++s) {
        if (e.pi[j][s].is_zero()) continue;
        while (dp[j].size() <= s) dp[j].push_back(d.total_derivative(dp[j].back()));
        zc += e.pi[j][s] * dp[j][s];
      }
    field.set(c, zc);
  }
  return prolonged(d, field);
}

EvolutionalDiffiety evolutional_generators(const Diffiety& d, const VectorField& z, int order) {
  VariationCheck check = check_variation(d, z, order);
  if (!check.ok)
    throw NotAVariation("field is not a variation: defect " + check.defect.str() + " at " +
                        Expr::atom(*check.failing).str());
  std::string name = "t";
  while (d.declares(name)) name += "_";
  EvolutionalDiffiety out;
  out.t = variable(name);
  for (AtomId c : d.seed_coordinates(order)) {
    OneForm omega = contact_form(d, Expr::atom(c));
    OneForm g = evaluate(omega, z) * OneForm::differential(out.t);
    g -= omega;
    out.generators.push_back({c, std::move(g)});
  }
  out.E = z;
  out.E.set(out.t, Expr(1));
  return out;
}

namespace {

Expr normalized(const Expr& c) {
  Polynomial n = c.numerator().monic();
  return Expr::fraction(n, Polynomial(1));
}

} // namespace

DeterminingSystem determining_system(const StandardBasis& b, const std::vector<AnsatzTarget>& ansatz,
                                     const std::vector<Expr>& p, int order) {
  const Diffiety& d = b.diffiety();
  if (b.mu() == 0) throw AnsatzUnderdetermined("no initial forms: the ansatz has nothing to act on");
  if (ansatz.empty()) throw AnsatzUnderdetermined("empty ansatz");
  if (order < 1) throw AnsatzUnderdetermined("z is read off pi^j_1, which needs order >= 1");
  for (const auto& t : ansatz) {
    if (t.chain >= b.mu()) throw MalformedInput("ansatz target chain out of range");
    for (std::size_t k : t.support)
      if (k >= b.mu()) throw MalformedInput("ansatz multiplier support out of range");
  }
  VectorField zp = variation_from_spec(b, VariationSpec{Expr(), p, {}}, order);

  // L_Z pi^j_0 = z pi^j_1 + L_{Z'} pi^j_0 with Z' the z = 0 part.
  std::vector<StandardExpansion> lam;
  for (const auto& t : ansatz) lam.push_back(b.expand(lie_derivative(d, zp, b.chain(t.chain, 0)), d.order_cap()));
  DeterminingSystem out;
  const StandardExpansion& first = lam.front();
  if (first.pi[ansatz.front().chain].size() < 2) throw AnsatzUnderdetermined("pi^j_1 outside the truncation");
  Expr z = -first.pi[ansatz.front().chain][1];
  out.solved["z"] = z;

  std::vector<Expr> constraints;
  auto push = [&constraints](const Expr& c) {
    if (c.is_zero()) return;
    Expr n = normalized(c);
    for (const auto& e : constraints)
      if (e == n) return;
    constraints.push_back(n);
  };
  for (std::size_t i = 0; i < ansatz.size(); ++i) {
    const auto& t = ansatz[i];
    StandardExpansion e = lam[i];
    if (e.pi[t.chain].size() < 2) e.pi[t.chain].resize(2);
    e.pi[t.chain][1] += z;
    push(e.dx);
    for (const auto& c : e.tau) push(c);
    for (std::size_t k = 0; k < e.pi.size(); ++k)
      for (std::size_t s = 0; s < e.pi[k].size(); ++s) {
        bool free = s == 0 && std::find(t.support.begin(), t.support.end(), k) != t.support.end();
        if (free)
          out.solved["lambda[" + std::to_string(t.chain + 1) + "," + std::to_string(k + 1) + "]"] = e.pi[k][s];
        else
          push(e.pi[k][s]);
      }
  }
  out.constraints = std::move(constraints);
  return out;
}

} // namespace diffiety
