#include <algorithm>
#include <tuple>

#include "diffiety/coordinates.hpp"

namespace diffiety {

Diffiety::Diffiety(const std::string& independent) : independent_(independent), x_(variable(independent)) {}

void Diffiety::check_fresh(const std::string& name) const {
  if (name == independent_ || find(name)) throw MalformedInput("duplicate coordinate name '" + name + "'");
}

std::optional<Diffiety::Entry> Diffiety::find(const std::string& name) const {
  for (std::size_t k = 0; k < chains_.size(); ++k)
    if (chains_[k].name == name) return Entry{Role::Chain, static_cast<int>(k)};
  for (std::size_t k = 0; k < singles_.size(); ++k)
    if (singles_[k].name == name) return Entry{Role::Single, static_cast<int>(k)};
  for (std::size_t k = 0; k < parameters_.size(); ++k)
    if (parameters_[k] == name) return Entry{Role::Parameter, static_cast<int>(k)};
  return std::nullopt;
}

void Diffiety::add_chain(const std::string& name, int offset) {
  check_fresh(name);
  chains_.push_back({name, offset});
}

void Diffiety::add_single(const std::string& name, int level, Expr deriv) {
  check_fresh(name);
  if (level < 0) throw MalformedInput("negative level for '" + name + "'");
  singles_.push_back({name, std::move(deriv), level});
  single_atoms_.push_back(variable(name));
}

void Diffiety::set_single_derivative(const std::string& name, Expr deriv) {
  auto e = find(name);
  if (!e || e->role != Role::Single) throw MalformedInput("'" + name + "' is not a declared coordinate");
  for (AtomId a : free_atoms(deriv))
    if (!is_coordinate(a) && a != x_)
      throw MalformedInput("derivative of '" + name + "' uses undeclared " + atom_info(a).text);
  singles_[e->decl].deriv = std::move(deriv);
}

void Diffiety::add_parameter(const std::string& name) {
  check_fresh(name);
  parameters_.push_back(name);
}

Diffiety Diffiety::lifted(int c) const {
  Diffiety d = *this;
  d.shift_ += c;
  return d;
}

AtomId Diffiety::chain_atom(int chain, int s) const {
  if (s > order_cap_)
    throw TruncationOverflow("chain " + chains_.at(chain).name + " index " + std::to_string(s) +
                             " exceeds the order cap " + std::to_string(order_cap_));
  int seen = touched_->load();
  while (s > seen && !touched_->compare_exchange_weak(seen, s)) {
  }
  return variable(chains_.at(chain).name, s);
}

AtomId Diffiety::single_atom(int single) const { return single_atoms_.at(single); }

std::optional<Coordinate> Diffiety::classify(AtomId a) const {
  const AtomInfo& info = atom_info(a);
  if (info.kind != AtomKind::Variable) return std::nullopt;
  if (a == x_) return Coordinate{Role::Independent, 0, -1};
  auto e = find(info.name);
  if (!e) return std::nullopt;
  if (e->role == Role::Chain) {
    if (info.index < 0) return std::nullopt;
    return Coordinate{Role::Chain, e->decl, info.index};
  }
  if (info.index >= 0) return std::nullopt;
  return Coordinate{e->role, e->decl, -1};
}

bool Diffiety::is_coordinate(AtomId a) const { return classify(a).has_value(); }

int Diffiety::level(AtomId a) const {
  auto c = classify(a);
  if (!c) throw MalformedInput("not a coordinate: " + atom_info(a).text);
  switch (c->role) {
  case Role::Chain: return c->index + chains_[c->decl].offset;
  case Role::Single: return singles_[c->decl].level;
  default: return -1;
  }
}

int Diffiety::max_seed_level() const {
  int m = 0;
  for (const auto& c : chains_) m = std::max(m, c.offset);
  for (const auto& s : singles_) m = std::max(m, s.level);
  return m;
}

Expr Diffiety::total_derivative_of(AtomId a) const {
  auto c = classify(a);
  if (!c) throw MalformedInput("total derivative of undeclared atom " + atom_info(a).text);
  switch (c->role) {
  case Role::Independent: return Expr(1);
  case Role::Chain: return Expr::atom(chain_atom(c->decl, c->index + 1));
  case Role::Single: return singles_[c->decl].deriv;
  case Role::Parameter: return Expr();
  }
  return Expr();
}

Expr Diffiety::total_derivative(const Expr& f) const {
  Expr out;
  for (AtomId a : free_atoms(f)) {
    Expr da = total_derivative_of(a);
    if (da.is_zero()) continue;
    out += da * partial(f, a);
  }
  return out;
}

Expr Diffiety::total_derivative(const Expr& f, int times) const {
  Expr e = f;
  for (int k = 0; k < times; ++k) e = total_derivative(e);
  return e;
}

std::vector<AtomId> Diffiety::seed_coordinates(int l) const {
  std::vector<AtomId> out;
  int top = l + shift_;
  for (std::size_t k = 0; k < singles_.size(); ++k)
    if (singles_[k].level <= top) out.push_back(single_atoms_[k]);
  for (std::size_t k = 0; k < chains_.size(); ++k)
    for (int s = 0; s + chains_[k].offset <= top; ++s) out.push_back(chain_atom(static_cast<int>(k), s));
  std::sort(out.begin(), out.end(), [this](AtomId a, AtomId b) { return column_less(a, b); });
  return out;
}

bool Diffiety::column_less(AtomId a, AtomId b) const {
  if (a == b) return false;
  auto key = [this](AtomId id) {
    auto c = classify(id);
    if (!c || c->role == Role::Parameter) return std::make_tuple(2, 0, 0, 0, id);
    if (c->role == Role::Independent) return std::make_tuple(1, 0, 0, 0, id);
    int lvl = level(id);
    int kind = c->role == Role::Single ? 0 : 1;
    return std::make_tuple(0, -lvl, kind, c->decl, static_cast<AtomId>(std::max(c->index, 0)));
  };
  return key(a) < key(b);
}

std::optional<Expr> Diffiety::resolve(const std::string& name, std::optional<int> index) const {
  if (name == independent_) {
    if (index) return std::nullopt;
    return Expr::atom(x_);
  }
  auto e = find(name);
  if (!e) return std::nullopt;
  if (e->role == Role::Chain) {
    if (!index) return std::nullopt;
    return Expr::atom(chain_atom(e->decl, *index));
  }
  if (index) return std::nullopt;
  return e->role == Role::Single ? Expr::atom(single_atoms_[e->decl]) : var(name);
}

} // namespace diffiety
