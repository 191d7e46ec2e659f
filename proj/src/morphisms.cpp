#include <algorithm>

#include "diffiety/morphisms.hpp"

namespace diffiety {

namespace {

std::map<AtomId, Expr> substitution(const Diffiety& d, const MorphismSpec& m) {
  std::map<AtomId, Expr> sigma = m.images;
  sigma[d.x()] = m.X;
  return sigma;
}

void require_images(const Diffiety& d, const MorphismSpec& m, const Expr& f) {
  for (AtomId a : free_atoms(f)) {
    if (a == d.x() || m.images.count(a)) continue;
    auto c = d.classify(a);
    if (!c || c->role == Role::Parameter) continue;
    if (c->role == Role::Chain)
      throw TruncationOverflow("no image for " + Expr::atom(a).str() + "; prolong the morphism further");
    throw MalformedInput("no image for " + Expr::atom(a).str());
  }
}

} // namespace

MorphismSpec prolong(const Diffiety& d, MorphismSpec spec, int order) {
  for (std::size_t i = 0; i < d.singles().size(); ++i)
    if (!spec.images.count(d.single_atom(static_cast<int>(i))))
      throw MalformedInput("morphism needs an image for " + d.singles()[i].name);
  for (std::size_t j = 0; j < d.chains().size(); ++j)
    if (!spec.images.count(d.chain_atom(static_cast<int>(j), 0)))
      throw MalformedInput("morphism needs an image for " + d.chains()[j].name + "[0]");

  Expr dX = d.total_derivative(spec.X);
  if (!dX.is_constant()) {
    NonzeroVerdict v = is_nonzero(dX, d.assumptions());
    if (v != NonzeroVerdict::NonzeroByAssumption)
      throw SingularJacobian("D(m*x) = " + dX.str() + " is not certified nonzero; add it to the assumptions");
  } else if (dX.is_zero()) {
    throw SingularJacobian("D(m*x) vanishes");
  }
  for (std::size_t j = 0; j < d.chains().size(); ++j) {
    int jj = static_cast<int>(j);
    for (int s = 0; s < order; ++s) {
      AtomId next = d.chain_atom(jj, s + 1);
      if (spec.images.count(next)) continue;
      spec.images[next] = d.total_derivative(spec.images.at(d.chain_atom(jj, s))) / dX;
    }
  }
  spec.order = std::max(spec.order, order);
  return spec;
}

Expr pullback(const Diffiety& d, const MorphismSpec& m, const Expr& f) {
  require_images(d, m, f);
  return substitute(f, substitution(d, m));
}

OneForm pullback(const Diffiety& d, const MorphismSpec& m, const OneForm& theta) {
  OneForm out;
  auto sigma = substitution(d, m);
  for (const auto& [c, a] : theta.terms()) {
    require_images(d, m, a);
    require_images(d, m, Expr::atom(c));
    Expr ma = substitute(a, sigma);
    if (ma.is_zero()) continue;
    out += ma * differential(d, sigma.at(c));
  }
  return out;
}

MorphismCheck check_morphism(const Diffiety& d, const MorphismSpec& m, int order) {
  MorphismCheck out;
  for (AtomId c : d.seed_coordinates(order)) {
    OneForm pb = pullback(d, m, contact_form(d, Expr::atom(c)));
    int top = 0;
    for (const auto& [a, coef] : pb.terms())
      if (a != d.x() && d.is_coordinate(a)) {
        auto k = d.classify(a);
        if (k->role != Role::Parameter) top = std::max(top, d.level(a) - d.shift());
      }
    MembershipCertificate cert = seed_span(d, top).reduce(pb);
    if (!cert.member()) {
      out.ok = false;
      out.failing = c;
      out.remainder = cert.remainder;
      return out;
    }
  }
  return out;
}

bool is_morphism(const Diffiety& d, const MorphismSpec& m, int order) { return check_morphism(d, m, order).ok; }

MorphismSpec compose(const Diffiety& d, const MorphismSpec& m2, const MorphismSpec& m1) {
  MorphismSpec out;
  out.X = pullback(d, m1, m2.X);
  out.order = m2.order;
  for (const auto& [c, e] : m2.images) {
    try {
      out.images[c] = pullback(d, m1, e);
    } catch (const TruncationOverflow&) {
      auto k = d.classify(c);
      if (k && k->role == Role::Chain) out.order = std::min(out.order, k->index - 1);
    }
  }
  // Keep a consistent prefix of each chain.
  for (auto it = out.images.begin(); it != out.images.end();) {
    auto k = d.classify(it->first);
    if (k && k->role == Role::Chain && k->index > out.order)
      it = out.images.erase(it);
    else
      ++it;
  }
  return out;
}

bool SymmetryReport::verified() const {
  return residual_ok && std::all_of(initial_forms_recovered.begin(), initial_forms_recovered.end(), [](bool b) { return b; });
}

namespace {

int max_chain_index(const Diffiety& d, const std::vector<OneForm>& forms) {
  int top = 0;
  for (const auto& f : forms)
    for (const auto& [c, a] : f.terms()) {
      std::vector<AtomId> atoms = free_atoms(a);
      atoms.push_back(c);
      for (AtomId x : atoms) {
        auto k = d.classify(x);
        if (k && k->role == Role::Chain) top = std::max(top, k->index);
      }
    }
  return top;
}

} // namespace

SymmetryReport symmetry_criterion(const StandardBasis& b, const MorphismSpec& m, int order) {
  const Diffiety& d = b.diffiety();
  std::vector<OneForm> sources = b.tau();
  for (std::size_t j = 0; j < b.mu(); ++j)
    for (int s = 0; s <= order; ++s) sources.push_back(b.chain(j, s));
  MorphismSpec full = prolong(d, m, std::max({m.order, order, max_chain_index(d, sources)}));
  if (!is_morphism(d, full, std::max(order, d.max_seed_level())))
    throw MalformedInput("symmetry criterion needs a morphism; the pullback leaves Omega");

  SymmetryReport r;
  r.verified_to = order;
  std::vector<OneForm> pulled;
  for (const auto& f : sources) pulled.push_back(pullback(d, full, f));
  std::vector<OneForm> residual(pulled.begin(), pulled.begin() + static_cast<std::ptrdiff_t>(b.tau().size()));
  r.residual_ok = span_equal(FormSpan(d, residual), b.filtration().residual());
  FormSpan image(d, pulled);
  for (std::size_t j = 0; j < b.mu(); ++j) r.initial_forms_recovered.push_back(image.contains(b.chain(j, 0)));
  return r;
}

Diffiety wave_space(int m, bool barred) {
  Diffiety d(barred ? "xbar" : "x");
  std::string base = barred ? "wbar" : "w";
  if (m == 1)
    d.add_chain(base);
  else
    for (int j = 1; j <= m; ++j) d.add_chain(base + std::to_string(j));
  return d;
}

bool WaveReport::all_hold() const {
  return std::all_of(identities.begin(), identities.end(), [](const WaveIdentity& i) { return i.holds; });
}

namespace {

/// Total derivative of d treating every atom outside d as a constant.
Expr partial_total(const Diffiety& d, const Expr& f) {
  Expr out;
  for (AtomId a : free_atoms(f)) {
    if (!d.is_coordinate(a)) continue;
    Expr da = d.total_derivative_of(a);
    if (!da.is_zero()) out += da * partial(f, a);
  }
  return out;
}

void run_side(const Diffiety& d, const Expr& V, int m, const std::map<AtomId, Expr>& maps, const std::string& name,
              std::vector<WaveIdentity>& out) {
  Expr dv = V;
  for (int k = 0; k <= m; ++k) {
    WaveIdentity id;
    id.label = name + "^" + std::to_string(k) + " V";
    id.residual = substitute(dv, maps);
    id.holds = id.residual.is_zero();
    out.push_back(std::move(id));
    dv = partial_total(d, dv);
  }
}

bool certified_nonzero(const Diffiety& d, const Expr& e) {
  if (e.is_zero()) return false;
  if (e.is_constant()) return true;
  NonzeroVerdict v = is_nonzero(e, d.assumptions());
  return v == NonzeroVerdict::NonzeroByAssumption || v == NonzeroVerdict::NonzeroGeneric;
}

} // namespace

WaveReport wave_check(const WaveData& data) {
  if (data.m < 1) throw MalformedInput("wave construction needs m >= 1");
  Diffiety plain = wave_space(data.m, false), barred = wave_space(data.m, true);
  WaveReport r;
  run_side(plain, data.V, data.m, data.forward, "D", r.identities);
  run_side(barred, data.V, data.m, data.backward, "Dbar", r.identities);
  if (auto it = data.forward.find(barred.x()); it != data.forward.end())
    r.forward_jacobian_nonzero = certified_nonzero(plain, plain.total_derivative(it->second));
  if (auto it = data.backward.find(plain.x()); it != data.backward.end())
    r.backward_jacobian_nonzero = certified_nonzero(barred, barred.total_derivative(it->second));
  return r;
}

} // namespace diffiety
