#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "diffiety/expr.hpp"

namespace diffiety {

/// Index of a chain atom: literal (`u[3]`) or template (`u[s+1]`).
struct IndexSpec {
  std::string variable; // empty for a literal index
  int offset = 0;
};

struct SyntaxNode {
  enum class Kind { Number, Symbol, Placeholder, Call, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Number;
  Rational value;                 // Number
  std::string name;               // Symbol, Call
  std::optional<IndexSpec> index; // Symbol
  std::vector<int> partials;      // Call: dF[i,j](...)
  int placeholder = 0;            // Placeholder
  std::vector<SyntaxNode> children;
  int line = 1;
  int column = 1;
};

/// Parses one expression; positions are reported relative to (line, column).
SyntaxNode parse_syntax(std::string_view text, int line = 1, int column = 1);

/// Name resolution used when turning syntax into expressions.
struct Scope {
  /// Identifier, with its resolved index when present.
  std::function<std::optional<Expr>(const std::string&, std::optional<int>)> resolve;
  std::function<std::optional<SymbolId>(const std::string&)> function;
  /// Values of template index variables such as `s`.
  std::map<std::string, int> bindings;
};

Expr to_expr(const SyntaxNode& node, const Scope& scope);

inline Expr parse_expr(std::string_view text, const Scope& scope, int line = 1, int column = 1) {
  return to_expr(parse_syntax(text, line, column), scope);
}

/// Scope that turns every identifier into a free variable and knows no functions.
Scope free_scope();

} // namespace diffiety
