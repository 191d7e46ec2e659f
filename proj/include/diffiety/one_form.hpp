#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "diffiety/coordinates.hpp"

namespace diffiety {

/// Finite combination sum a_c dc over coordinate differentials; the
/// independent variable is an ordinary key, so dx sits in the same map.
class OneForm {
public:
  using Terms = std::map<AtomId, Expr>;

  OneForm() = default;
  static OneForm differential(AtomId c) { return term(c, Expr(1)); }
  static OneForm term(AtomId c, const Expr& a);

  const Terms& terms() const { return terms_; }
  Expr coefficient(AtomId c) const;
  void add(AtomId c, const Expr& a);
  bool is_zero() const { return terms_.empty(); }

  OneForm operator+(const OneForm& o) const;
  OneForm operator-(const OneForm& o) const;
  OneForm operator-() const;
  OneForm& operator+=(const OneForm& o);
  OneForm& operator-=(const OneForm& o);
  friend OneForm operator*(const Expr& f, const OneForm& t);
  bool operator==(const OneForm& o) const { return terms_ == o.terms_; }

  /// Terms printed in the column order of the diffiety.
  std::string str(const Diffiety& d) const;

private:
  Terms terms_;
};

/// Skew combination of da^db, keys ordered with first < second.
class TwoForm {
public:
  using Terms = std::map<std::pair<AtomId, AtomId>, Expr>;

  const Terms& terms() const { return terms_; }
  void add(AtomId a, AtomId b, const Expr& c);
  bool is_zero() const { return terms_.empty(); }
  TwoForm operator+(const TwoForm& o) const;
  TwoForm operator-(const TwoForm& o) const;
  friend TwoForm operator*(const Expr& f, const TwoForm& t);

private:
  Terms terms_;
};

TwoForm wedge(const OneForm& a, const OneForm& b);

/// Derivation f -> sum (Zc) df/dc. Unassigned atoms are resolved by the
/// fallback when present and are zero otherwise.
class VectorField {
public:
  VectorField() = default;
  void set(AtomId c, const Expr& value);
  void set_fallback(std::function<Expr(AtomId)> f) { fallback_ = std::move(f); }
  Expr component(AtomId c) const;
  const std::map<AtomId, Expr>& assigned() const { return components_; }
  Expr apply(const Expr& f) const;

  /// Total derivative D of the diffiety as a field.
  static VectorField total_derivative(const Diffiety& d);
  /// Coordinate field d/dc.
  static VectorField coordinate(AtomId c);

private:
  std::map<AtomId, Expr> components_;
  std::function<Expr(AtomId)> fallback_;
};

/// df over the coordinates; parameters are constants.
OneForm differential(const Diffiety& d, const Expr& f);
/// omega{f} = df - (Df) dx.
OneForm contact_form(const Diffiety& d, const Expr& f);
OneForm lie_derivative_D(const Diffiety& d, const OneForm& theta);
/// Lie derivative along an arbitrary field: sum (Z a_c) dc + a_c d(Zc).
OneForm lie_derivative(const Diffiety& d, const VectorField& z, const OneForm& theta);
Expr evaluate(const OneForm& theta, const VectorField& z);
/// theta(D), which vanishes exactly on forms of Omega.
Expr evaluate_D(const Diffiety& d, const OneForm& theta);
TwoForm exterior_derivative(const Diffiety& d, const OneForm& theta);
/// Z contracted into a two-form.
OneForm contract(const VectorField& z, const TwoForm& eta);
/// Representative theta in Omega with eta = theta^dx modulo Omega^Omega.
OneForm reduce_two_form(const Diffiety& d, const TwoForm& eta);

} // namespace diffiety
