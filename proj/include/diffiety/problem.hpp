#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "diffiety/morphisms.hpp"
#include "diffiety/syntax.hpp"

namespace diffiety {

/// Parsed problem file.
///
///   [independent]  x
///   [chain]        u            (optional offset=N)
///   [coordinate]   w level=0 deriv=F(u[1],v[1])
///   [parameter]    c
///   [function]     F arity=2 derivative(1)=expr-in-#1..#N
///   [assume_nonzero] expr
///   [named]        id = expr
///   [filtration]   max_level=N | lift=N | order_cap=N
///
/// One entry per line; an entry may follow its header on the same line.
/// `#` starts a comment unless a digit follows it (placeholders #1, #2).
struct ProblemFile {
  Diffiety diffiety;
  std::map<std::string, SymbolId> functions;
  std::map<std::string, Expr> named;
  std::optional<int> max_level;
  int lift = 0;

  /// Coordinates, parameters, named expressions and functions.
  Scope scope() const;
  Expr parse(std::string_view text) const;
  /// Diffiety with the lift applied.
  Diffiety lifted() const { return lift ? diffiety.lifted(lift) : diffiety; }
};

ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::string& path);
std::string read_text_file(const std::string& path);

/// Lines `X = expr`, `u[0] = expr` (or `u = expr`), `w = expr` for singles,
/// optional `order = N`.
MorphismSpec parse_morphism(const ProblemFile& p, std::string_view text);

/// Lines `m = N`, `V = expr`, then `forward:` and `backward:` blocks of
/// `name = expr` lines over the spaces built by wave_space.
WaveData parse_wave(std::string_view text);

} // namespace diffiety
