#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "diffiety/errors.hpp"
#include "diffiety/polynomial.hpp"

namespace diffiety {

/// Exact expression in canonical form: a reduced fraction of polynomials over
/// the rationals whose indeterminates are atoms (variables, placeholders and
/// function applications). Values are immutable and cheap to copy.
class Expr {
public:
  Expr();
  Expr(const Rational& c);
  Expr(int c) : Expr(Rational(c)) {}
  explicit Expr(Polynomial p);

  static Expr atom(AtomId id);
  /// Reduces num/den; throws DegenerateExpression when den is zero.
  static Expr fraction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return data_->num; }
  const Polynomial& denominator() const { return data_->den; }

  bool is_zero() const { return data_->num.is_zero(); }
  bool is_constant() const { return data_->num.is_constant() && data_->den.is_constant(); }
  bool is_polynomial() const { return data_->den.is_constant(); }
  Rational constant_value() const;

  Expr operator-() const;
  Expr add(const Expr& o) const;
  Expr mul(const Expr& o) const;
  Expr div(const Expr& o) const;
  friend Expr operator+(const Expr& a, const Expr& b) { return a.add(b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return a.add(-b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return a.mul(b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return a.div(b); }
  Expr& operator+=(const Expr& o) { return *this = add(o); }
  Expr& operator-=(const Expr& o) { return *this = add(-o); }
  Expr& operator*=(const Expr& o) { return *this = mul(o); }
  Expr& operator/=(const Expr& o) { return *this = div(o); }
  Expr pow(int exponent) const;

  bool equals(const Expr& o) const;
  friend bool operator==(const Expr& a, const Expr& b) { return a.equals(b); }
  friend bool operator!=(const Expr& a, const Expr& b) { return !a.equals(b); }

  /// Deterministic, re-parsable rendering.
  std::string str() const;

private:
  struct Data {
    Polynomial num;
    Polynomial den;
  };
  explicit Expr(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  /// num/den already known to be coprime; only normalizes the denominator.
  static Expr fraction_coprime(Polynomial num, Polynomial den);
  std::shared_ptr<const Data> data_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

// ---------------------------------------------------------------------------
// Atoms and function symbols

using SymbolId = std::uint32_t;

enum class AtomKind { Variable, Placeholder, Application };

struct AtomInfo {
  AtomKind kind = AtomKind::Variable;
  std::string name;        // variable name or function name
  int index = -1;          // chain index, placeholder number; -1 when absent
  SymbolId symbol = 0;     // applications only
  std::vector<int> partials; // sorted 1-based argument indices
  std::vector<Expr> args;
  std::vector<AtomId> free_atoms; // variables and placeholders reachable, sorted
  std::string text;        // printed form
};

struct FunctionSymbol {
  std::string name;
  int arity = 1;
  /// Per argument index (0-based); empty means the opaque partial symbol.
  std::vector<std::optional<Expr>> rules;
};

AtomId variable(const std::string& name, int index = -1);
AtomId placeholder(int k);
AtomId application(SymbolId symbol, std::vector<int> partials, std::vector<Expr> args);
const AtomInfo& atom_info(AtomId id);

/// Registers a fresh function symbol; names need not be unique process-wide.
SymbolId register_function(const std::string& name, int arity);
/// Installs d/d(arg_index) of the symbol as an expression in #1..#arity.
void set_derivative_rule(SymbolId symbol, int arg_index, const Expr& rule);
FunctionSymbol function_symbol(SymbolId symbol);

/// Convenience constructors.
inline Expr var(const std::string& name, int index = -1) { return Expr::atom(variable(name, index)); }
Expr apply(SymbolId symbol, std::vector<Expr> args);
Expr apply_partial(SymbolId symbol, std::vector<int> partials, std::vector<Expr> args);

/// Total order on atoms independent of interning order.
bool atom_structural_less(AtomId a, AtomId b);

// ---------------------------------------------------------------------------
// Kernel operations

/// Atoms occurring directly in numerator or denominator.
std::vector<AtomId> atoms(const Expr& e);
/// Variables and placeholders reachable, including inside applications.
std::vector<AtomId> free_atoms(const Expr& e);
bool depends_on(const Expr& e, AtomId var);

/// Exact partial derivative; chain rule through function applications.
Expr partial(const Expr& e, AtomId var);

/// Simultaneous substitution of variables/placeholders (also inside applications).
Expr substitute(const Expr& e, const std::map<AtomId, Expr>& sigma);

/// Exact value at a point assigning every direct atom; throws PoleAtPoint.
Rational eval_rational(const Expr& e, const std::map<AtomId, Rational>& point);

enum class NonzeroVerdict { Zero, NonzeroGeneric, NonzeroByAssumption, Undecided };
const char* to_string(NonzeroVerdict v);

/// Set of expressions asserted not to vanish.
class AssumptionSet {
public:
  AssumptionSet() = default;
  void add(const Expr& e);
  const std::vector<Expr>& members() const { return members_; }
  bool empty() const { return members_.empty(); }

private:
  std::vector<Expr> members_;
};

NonzeroVerdict is_nonzero(const Expr& e, const AssumptionSet& a);

} // namespace diffiety

namespace Eigen {
template <>
struct NumTraits<diffiety::Expr> : GenericNumTraits<diffiety::Expr> {
  using Real = diffiety::Expr;
  using NonInteger = diffiety::Expr;
  using Nested = diffiety::Expr;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 10,
    MulCost = 20
  };
};
template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  using Real = mpq_class;
  using NonInteger = mpq_class;
  using Nested = mpq_class;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
};
} // namespace Eigen
