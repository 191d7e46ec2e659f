#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "diffiety/problem.hpp"

namespace diffiety {

namespace {

struct Line {
  std::string text;
  int number = 0;
  int column = 1; // column of text[0]
};

std::string strip_comment(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '#' && !(i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) return s.substr(0, i);
  return s;
}

Line trimmed(const std::string& s, int number, int column) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {s.substr(b, e - b), number, column + static_cast<int>(b)};
}

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::string cur;
  int number = 1;
  auto flush = [&] {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    out.push_back(trimmed(strip_comment(cur), number, 1));
    cur.clear();
    ++number;
  };
  for (char c : text) {
    if (c == '\n')
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

struct KeyValue {
  std::string key;
  Line value;
};

/// "head k1=v1 k2=v2": keys are the words right before each '='.
std::pair<Line, std::vector<KeyValue>> split_keys(const Line& l) {
  const std::string& s = l.text;
  std::vector<std::pair<std::size_t, std::size_t>> keys; // key start, '=' position
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '=') continue;
    std::size_t k = i;
    while (k > 0 && !std::isspace(static_cast<unsigned char>(s[k - 1]))) --k;
    if (k == i) throw ParseError("'=' without a key", l.number, l.column + static_cast<int>(i));
    keys.emplace_back(k, i);
  }
  std::size_t head_end = keys.empty() ? s.size() : keys.front().first;
  Line head = trimmed(s.substr(0, head_end), l.number, l.column);
  std::vector<KeyValue> out;
  for (std::size_t n = 0; n < keys.size(); ++n) {
    auto [k, eq] = keys[n];
    std::size_t end = n + 1 < keys.size() ? keys[n + 1].first : s.size();
    out.push_back({s.substr(k, eq - k), trimmed(s.substr(eq + 1, end - eq - 1), l.number, l.column + static_cast<int>(eq) + 1)});
  }
  return {head, out};
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

int parse_int(const Line& v) {
  try {
    std::size_t used = 0;
    int n = std::stoi(v.text, &used);
    if (used == v.text.size()) return n;
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer, got '" + v.text + "'", v.number, v.column);
}

Line require_identifier(const Line& l, const char* what) {
  if (!is_identifier(l.text)) throw ParseError(std::string("expected ") + what + " name, got '" + l.text + "'", l.number, l.column);
  return l;
}

struct Pending {
  Line line;
  std::string target;
};

const std::set<std::string> sections{"independent", "chain", "coordinate", "parameter", "function",
                                      "assume_nonzero", "named", "filtration"};

} // namespace

Scope ProblemFile::scope() const {
  Scope s;
  s.resolve = [this](const std::string& name, std::optional<int> index) -> std::optional<Expr> {
    if (auto e = diffiety.resolve(name, index)) return e;
    if (!index)
      if (auto it = named.find(name); it != named.end()) return it->second;
    return std::nullopt;
  };
  s.function = [this](const std::string& name) -> std::optional<SymbolId> {
    if (auto it = functions.find(name); it != functions.end()) return it->second;
    return std::nullopt;
  };
  return s;
}

Expr ProblemFile::parse(std::string_view text) const { return parse_expr(text, scope()); }

ProblemFile parse_problem(std::string_view text) {
  std::vector<Line> lines = split_lines(text);
  std::string section;
  std::optional<Line> independent;
  struct ChainEntry {
    Line name;
    int offset;
  };
  struct CoordEntry {
    Line name;
    int level;
    std::optional<Line> deriv;
  };
  struct FunctionEntry {
    Line name;
    int arity;
    std::vector<std::pair<int, Line>> rules;
  };
  std::vector<ChainEntry> chains;
  std::vector<CoordEntry> coords;
  std::vector<Line> params, assumptions;
  std::vector<FunctionEntry> functions;
  std::vector<std::pair<Line, Line>> named;
  ProblemFile out;

  for (Line l : lines) {
    if (l.text.empty()) continue;
    if (l.text.front() == '[') {
      std::size_t close = l.text.find(']');
      if (close == std::string::npos) throw ParseError("unterminated section header", l.number, l.column);
      section = l.text.substr(1, close - 1);
      if (!sections.count(section)) throw ParseError("unknown section [" + section + "]", l.number, l.column);
      l = trimmed(l.text.substr(close + 1), l.number, l.column + static_cast<int>(close) + 1);
      if (l.text.empty()) continue;
    }
    if (section.empty()) throw ParseError("entry outside any section", l.number, l.column);
    if (section == "independent") {
      if (independent) throw ParseError("second independent variable", l.number, l.column);
      independent = require_identifier(l, "independent variable");
    } else if (section == "chain") {
      auto [head, kv] = split_keys(l);
      ChainEntry c{require_identifier(head, "chain"), 0};
      for (const auto& [k, v] : kv) {
        if (k != "offset") throw ParseError("unknown key '" + k + "' for a chain", v.number, v.column);
        c.offset = parse_int(v);
      }
      chains.push_back(c);
    } else if (section == "coordinate") {
      auto [head, kv] = split_keys(l);
      CoordEntry c{require_identifier(head, "coordinate"), 0, std::nullopt};
      bool has_level = false;
      for (const auto& [k, v] : kv) {
        if (k == "level") {
          c.level = parse_int(v);
          has_level = true;
        } else if (k == "deriv") {
          c.deriv = v;
        } else {
          throw ParseError("unknown key '" + k + "' for a coordinate", v.number, v.column);
        }
      }
      if (!has_level) throw ParseError("coordinate needs level=N", l.number, l.column);
      coords.push_back(c);
    } else if (section == "parameter") {
      params.push_back(require_identifier(l, "parameter"));
    } else if (section == "function") {
      auto [head, kv] = split_keys(l);
      FunctionEntry f{require_identifier(head, "function"), 0, {}};
      for (const auto& [k, v] : kv) {
        if (k == "arity") {
          f.arity = parse_int(v);
        } else if (k.rfind("derivative(", 0) == 0 && k.back() == ')') {
          Line idx{k.substr(11, k.size() - 12), v.number, v.column};
          f.rules.emplace_back(parse_int(idx), v);
        } else {
          throw ParseError("unknown key '" + k + "' for a function", v.number, v.column);
        }
      }
      if (f.arity < 1) throw ParseError("function needs arity=N with N >= 1", l.number, l.column);
      functions.push_back(f);
    } else if (section == "assume_nonzero") {
      assumptions.push_back(l);
    } else if (section == "named") {
      auto eq = l.text.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'id = expr'", l.number, l.column);
      Line id = trimmed(l.text.substr(0, eq), l.number, l.column);
      named.emplace_back(require_identifier(id, "named expression"),
                         trimmed(l.text.substr(eq + 1), l.number, l.column + static_cast<int>(eq) + 1));
    } else if (section == "filtration") {
      auto [head, kv] = split_keys(l);
      if (!head.text.empty() || kv.size() != 1) throw ParseError("expected key=N", l.number, l.column);
      const auto& [k, v] = kv.front();
      if (k == "max_level")
        out.max_level = parse_int(v);
      else if (k == "lift")
        out.lift = parse_int(v);
      else if (k == "order_cap")
        out.diffiety.set_order_cap(parse_int(v));
      else
        throw ParseError("unknown filtration key '" + k + "'", v.number, v.column);
    }
  }
  if (!independent) throw ParseError("no independent variable declared", 1, 1);

  int cap = out.diffiety.order_cap();
  out.diffiety = Diffiety(independent->text);
  out.diffiety.set_order_cap(cap);
  std::set<std::string> taken{independent->text};
  auto fresh = [&taken](const Line& l) {
    if (!taken.insert(l.text).second) throw ParseError("duplicate name '" + l.text + "'", l.number, l.column);
  };
  for (const auto& c : chains) {
    fresh(c.name);
    out.diffiety.add_chain(c.name.text, c.offset);
  }
  for (const auto& c : coords) {
    fresh(c.name);
    out.diffiety.add_single(c.name.text, c.level);
  }
  for (const auto& p : params) {
    fresh(p);
    out.diffiety.add_parameter(p.text);
  }
  for (const auto& f : functions) {
    fresh(f.name);
    out.functions.emplace(f.name.text, register_function(f.name.text, f.arity));
  }
  for (const auto& [id, v] : named) fresh(id);

  Scope scope = out.scope();
  auto expr = [&scope](const Line& v) { return parse_expr(v.text, scope, v.number, v.column); };
  for (const auto& f : functions)
    for (const auto& [i, v] : f.rules) {
      if (i < 1 || i > f.arity) throw ParseError("derivative index out of range", v.number, v.column);
      set_derivative_rule(out.functions.at(f.name.text), i, expr(v));
    }
  // Named expressions may use earlier ones; they are visible to the derivatives below.
  for (const auto& [id, v] : named) out.named.emplace(id.text, expr(v));
  for (const auto& c : coords)
    if (c.deriv) out.diffiety.set_single_derivative(c.name.text, expr(*c.deriv));
  for (const auto& a : assumptions) out.diffiety.assumptions().add(expr(a));
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile load_problem(const std::string& path) { return parse_problem(read_text_file(path)); }

namespace {

std::pair<Line, Line> assignment(const Line& l) {
  auto eq = l.text.find('=');
  if (eq == std::string::npos) throw ParseError("expected 'name = expr'", l.number, l.column);
  return {trimmed(l.text.substr(0, eq), l.number, l.column),
          trimmed(l.text.substr(eq + 1), l.number, l.column + static_cast<int>(eq) + 1)};
}

/// "u[3]" or "u" -> (name, index).
std::pair<std::string, std::optional<int>> target_name(const Line& l) {
  auto open = l.text.find('[');
  if (open == std::string::npos) return {require_identifier(l, "target").text, std::nullopt};
  if (l.text.back() != ']') throw ParseError("malformed target '" + l.text + "'", l.number, l.column);
  Line name = trimmed(l.text.substr(0, open), l.number, l.column);
  Line idx = trimmed(l.text.substr(open + 1, l.text.size() - open - 2), l.number, l.column + static_cast<int>(open) + 1);
  return {require_identifier(name, "target").text, parse_int(idx)};
}

} // namespace

MorphismSpec parse_morphism(const ProblemFile& p, std::string_view text) {
  const Diffiety& d = p.diffiety;
  MorphismSpec spec;
  bool has_x = false;
  for (const Line& l : split_lines(text)) {
    if (l.text.empty()) continue;
    auto [lhs, rhs] = assignment(l);
    if (lhs.text == "order") {
      spec.order = parse_int(rhs);
      continue;
    }
    Expr value = parse_expr(rhs.text, p.scope(), rhs.number, rhs.column);
    if (lhs.text == "X") {
      spec.X = value;
      has_x = true;
      continue;
    }
    auto [name, index] = target_name(lhs);
    std::optional<Expr> atom = d.resolve(name, index);
    if (!atom && !index) atom = d.resolve(name, 0);
    if (!atom) throw ParseError("'" + lhs.text + "' is not a coordinate", lhs.number, lhs.column);
    AtomId a = atom->numerator().leading_monomial().factors().front().first;
    if (a == d.x() || d.classify(a)->role == Role::Parameter)
      throw ParseError("images are given for chains and singles only", lhs.number, lhs.column);
    if (!spec.images.emplace(a, value).second) throw ParseError("duplicate image for '" + lhs.text + "'", lhs.number, lhs.column);
  }
  if (!has_x) throw ParseError("morphism file needs 'X = expr'", 1, 1);
  return spec;
}

WaveData parse_wave(std::string_view text) {
  std::vector<Line> lines = split_lines(text);
  WaveData data;
  bool has_m = false;
  for (const Line& l : lines)
    if (!l.text.empty() && l.text.back() != ':') {
      auto [lhs, rhs] = assignment(l);
      if (lhs.text == "m") {
        data.m = parse_int(rhs);
        has_m = true;
      }
    }
  if (!has_m) throw ParseError("wave file needs 'm = N'", 1, 1);
  if (data.m < 1) throw ParseError("m must be positive", 1, 1);
  Diffiety plain = wave_space(data.m, false), barred = wave_space(data.m, true);
  Scope scope;
  scope.resolve = [&](const std::string& name, std::optional<int> index) -> std::optional<Expr> {
    if (auto e = plain.resolve(name, index)) return e;
    return barred.resolve(name, index);
  };
  std::string block;
  bool has_v = false;
  for (const Line& l : lines) {
    if (l.text.empty()) continue;
    if (l.text == "forward:" || l.text == "backward:") {
      block = l.text.substr(0, l.text.size() - 1);
      continue;
    }
    auto [lhs, rhs] = assignment(l);
    if (block.empty()) {
      if (lhs.text == "m") continue;
      if (lhs.text != "V") throw ParseError("unknown key '" + lhs.text + "'", lhs.number, lhs.column);
      data.V = parse_expr(rhs.text, scope, rhs.number, rhs.column);
      has_v = true;
      continue;
    }
    auto [name, index] = target_name(lhs);
    std::optional<Expr> atom = scope.resolve(name, index);
    if (!atom && !index) atom = scope.resolve(name, 0);
    if (!atom) throw ParseError("'" + lhs.text + "' is not a wave coordinate", lhs.number, lhs.column);
    AtomId a = atom->numerator().leading_monomial().factors().front().first;
    auto& table = block == "forward" ? data.forward : data.backward;
    if (!table.emplace(a, parse_expr(rhs.text, scope, rhs.number, rhs.column)).second)
      throw ParseError("duplicate map for '" + lhs.text + "'", lhs.number, lhs.column);
  }
  if (!has_v) throw ParseError("wave file needs 'V = expr'", 1, 1);
  return data;
}

} // namespace diffiety
