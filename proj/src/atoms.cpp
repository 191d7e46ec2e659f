#include <algorithm>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "diffiety/expr.hpp"

namespace diffiety {

namespace {

std::string raw_key(const Polynomial& p) {
  std::ostringstream os;
  for (const auto& [m, c] : p.terms()) {
    os << c.get_str() << '*';
    for (const auto& [a, e] : m.factors()) os << a << '^' << e << '.';
    os << ';';
  }
  return os.str();
}

std::string raw_key(const Expr& e) { return raw_key(e.numerator()) + "/" + raw_key(e.denominator()); }

/// Process-wide interning table. Entries are never removed, so references
/// handed out by atom_info stay valid.
class Registry {
public:
  static Registry& instance() {
    static Registry r;
    return r;
  }

  AtomId intern(const std::string& key, const std::function<AtomInfo()>& make) {
    {
      std::shared_lock lock(mutex_);
      auto it = index_.find(key);
      if (it != index_.end()) return it->second;
    }
    AtomInfo info = make();
    std::unique_lock lock(mutex_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(std::make_unique<AtomInfo>(std::move(info)));
    index_.emplace(key, id);
    return id;
  }

  const AtomInfo& info(AtomId id) const {
    std::shared_lock lock(mutex_);
    return *atoms_.at(id);
  }

  SymbolId add_symbol(FunctionSymbol s) {
    std::unique_lock lock(mutex_);
    symbols_.push_back(std::move(s));
    return static_cast<SymbolId>(symbols_.size() - 1);
  }

  void set_rule(SymbolId id, int arg, const Expr& rule) {
    std::unique_lock lock(mutex_);
    auto& s = symbols_.at(id);
    if (arg < 1 || arg > s.arity) throw MalformedInput("derivative rule index out of range for " + s.name);
    s.rules[arg - 1] = rule;
  }

  FunctionSymbol symbol(SymbolId id) const {
    std::shared_lock lock(mutex_);
    return symbols_.at(id);
  }

private:
  mutable std::shared_mutex mutex_;
  std::vector<std::unique_ptr<AtomInfo>> atoms_;
  std::unordered_map<std::string, AtomId> index_;
  std::vector<FunctionSymbol> symbols_;
};

} // namespace

AtomId variable(const std::string& name, int index) {
  std::string key = "v:" + name + ":" + std::to_string(index);
  return Registry::instance().intern(key, [&] {
    AtomInfo info;
    info.kind = AtomKind::Variable;
    info.name = name;
    info.index = index;
    info.text = index < 0 ? name : name + "[" + std::to_string(index) + "]";
    return info;
  });
}

AtomId placeholder(int k) {
  std::string key = "p:" + std::to_string(k);
  return Registry::instance().intern(key, [&] {
    AtomInfo info;
    info.kind = AtomKind::Placeholder;
    info.name = "#";
    info.index = k;
    info.text = "#" + std::to_string(k);
    return info;
  });
}

AtomId application(SymbolId symbol, std::vector<int> partials, std::vector<Expr> args) {
  std::sort(partials.begin(), partials.end());
  FunctionSymbol sym = function_symbol(symbol);
  if (static_cast<int>(args.size()) != sym.arity)
    throw MalformedInput(sym.name + " expects " + std::to_string(sym.arity) + " arguments");
  for (int p : partials)
    if (p < 1 || p > sym.arity) throw MalformedInput("partial index out of range for " + sym.name);

  std::string key = "a:" + std::to_string(symbol) + ":";
  for (int p : partials) key += std::to_string(p) + ",";
  key += ":";
  for (const auto& a : args) key += raw_key(a) + "|";

  return Registry::instance().intern(key, [&] {
    AtomInfo info;
    info.kind = AtomKind::Application;
    info.name = sym.name;
    info.symbol = symbol;
    info.partials = partials;
    info.args = args;
    for (const auto& a : args) {
      auto f = free_atoms(a);
      info.free_atoms.insert(info.free_atoms.end(), f.begin(), f.end());
    }
    std::sort(info.free_atoms.begin(), info.free_atoms.end());
    info.free_atoms.erase(std::unique(info.free_atoms.begin(), info.free_atoms.end()), info.free_atoms.end());
    std::string head = sym.name;
    if (!partials.empty()) {
      head = "d" + sym.name + "[";
      for (std::size_t k = 0; k < partials.size(); ++k) head += (k ? "," : "") + std::to_string(partials[k]);
      head += "]";
    }
    head += "(";
    for (std::size_t k = 0; k < args.size(); ++k) head += (k ? "," : "") + args[k].str();
    info.text = head + ")";
    return info;
  });
}

const AtomInfo& atom_info(AtomId id) { return Registry::instance().info(id); }

SymbolId register_function(const std::string& name, int arity) {
  if (arity < 1) throw MalformedInput("function arity must be positive: " + name);
  FunctionSymbol s;
  s.name = name;
  s.arity = arity;
  s.rules.resize(arity);
  return Registry::instance().add_symbol(std::move(s));
}

void set_derivative_rule(SymbolId symbol, int arg_index, const Expr& rule) {
  FunctionSymbol s = function_symbol(symbol);
  for (AtomId a : free_atoms(rule)) {
    const auto& info = atom_info(a);
    if (info.kind != AtomKind::Placeholder || info.index < 1 || info.index > s.arity)
      throw MalformedInput("derivative rule of " + s.name + " may only use #1..#" + std::to_string(s.arity));
  }
  Registry::instance().set_rule(symbol, arg_index, rule);
}

FunctionSymbol function_symbol(SymbolId symbol) { return Registry::instance().symbol(symbol); }

Expr apply(SymbolId symbol, std::vector<Expr> args) { return Expr::atom(application(symbol, {}, std::move(args))); }

Expr apply_partial(SymbolId symbol, std::vector<int> partials, std::vector<Expr> args) {
  return Expr::atom(application(symbol, std::move(partials), std::move(args)));
}

bool atom_structural_less(AtomId a, AtomId b) {
  if (a == b) return false;
  const AtomInfo& x = atom_info(a);
  const AtomInfo& y = atom_info(b);
  auto rank = [](AtomKind k) { return k == AtomKind::Variable ? 0 : k == AtomKind::Application ? 1 : 2; };
  if (rank(x.kind) != rank(y.kind)) return rank(x.kind) < rank(y.kind);
  if (x.kind == AtomKind::Variable) {
    if (x.name != y.name) return x.name < y.name;
    return x.index < y.index;
  }
  if (x.kind == AtomKind::Placeholder) return x.index < y.index;
  if (x.text != y.text) return x.text < y.text;
  return x.symbol < y.symbol;
}

} // namespace diffiety
