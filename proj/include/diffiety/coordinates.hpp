#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffiety/expr.hpp"

namespace diffiety {

/// Unbounded family c[0], c[1], ... with D c[s] = c[s+1]; level(c[s]) = s + offset.
struct ChainDecl {
  std::string name;
  int offset = 0;
};

/// Coordinate with an explicit total derivative and seed level.
struct SingleDecl {
  std::string name;
  Expr deriv;
  int level = 0;
};

enum class Role { Independent, Chain, Single, Parameter };

struct Coordinate {
  Role role = Role::Independent;
  int decl = 0;  // index into chains/singles/parameters
  int index = -1; // chain index
};

/// Coordinate system on an ODE diffiety together with its assumption set
/// and the seed filtration Omega_l = span{omega{c} : level(c) <= l + shift}.
class Diffiety {
public:
  static constexpr int default_order_cap = 32;

  explicit Diffiety(const std::string& independent = "x");

  void add_chain(const std::string& name, int offset = 0);
  void add_single(const std::string& name, int level, Expr deriv = Expr());
  void set_single_derivative(const std::string& name, Expr deriv);
  void add_parameter(const std::string& name);

  const std::string& independent_name() const { return independent_; }
  AtomId x() const { return x_; }
  const std::vector<ChainDecl>& chains() const { return chains_; }
  const std::vector<SingleDecl>& singles() const { return singles_; }
  const std::vector<std::string>& parameters() const { return parameters_; }

  AssumptionSet& assumptions() { return assumptions_; }
  const AssumptionSet& assumptions() const { return assumptions_; }

  int order_cap() const { return order_cap_; }
  void set_order_cap(int cap) { order_cap_ = cap; }
  int shift() const { return shift_; }
  /// Same diffiety with the seed filtration lifted: Omega'_l = Omega_{l+c}.
  Diffiety lifted(int c) const;

  /// Chain atom c[s]; throws TruncationOverflow past the order cap.
  AtomId chain_atom(int chain, int s) const;
  AtomId single_atom(int single) const;
  std::optional<Coordinate> classify(AtomId a) const;
  bool is_coordinate(AtomId a) const;
  /// Declared seed level (the lift is not applied).
  int level(AtomId a) const;
  int max_seed_level() const;
  /// Largest chain index materialized so far.
  int max_index_touched() const { return touched_->load(); }

  /// D of a coordinate atom (zero for parameters).
  Expr total_derivative_of(AtomId a) const;
  Expr total_derivative(const Expr& f) const;
  Expr total_derivative(const Expr& f, int times) const;

  /// Coordinates generating Omega_l in column order.
  std::vector<AtomId> seed_coordinates(int l) const;
  /// Column order: descending level, singles before chains, declaration
  /// order, chain index; the independent variable comes last.
  bool column_less(AtomId a, AtomId b) const;

  /// Name lookup for the expression parser.
  std::optional<Expr> resolve(const std::string& name, std::optional<int> index) const;
  /// True when the name is the independent variable or a declared coordinate or parameter.
  bool declares(const std::string& name) const { return name == independent_ || find(name).has_value(); }

private:
  struct Entry {
    Role role;
    int decl;
  };
  std::optional<Entry> find(const std::string& name) const;
  void check_fresh(const std::string& name) const;

  std::string independent_;
  AtomId x_;
  std::vector<ChainDecl> chains_;
  std::vector<SingleDecl> singles_;
  std::vector<AtomId> single_atoms_;
  std::vector<std::string> parameters_;
  AssumptionSet assumptions_;
  int order_cap_ = default_order_cap;
  int shift_ = 0;
  std::shared_ptr<std::atomic<int>> touched_ = std::make_shared<std::atomic<int>>(0);
};

} // namespace diffiety
