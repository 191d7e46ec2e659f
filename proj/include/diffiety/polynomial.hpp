#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace diffiety {

using Rational = mpq_class;
using AtomId = std::uint32_t;

/// Power product of atoms, kept sorted by atom id with positive exponents.
class Monomial {
public:
  using Factor = std::pair<AtomId, std::uint32_t>;

  Monomial() = default;
  static Monomial atom(AtomId id, std::uint32_t exponent = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t degree_in(AtomId id) const;
  std::uint32_t total_degree() const;

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// other / *this; requires divides(other).
  Monomial quotient_of(const Monomial& other) const;
  Monomial without(AtomId id) const;
  static Monomial gcd(const Monomial& a, const Monomial& b);

  bool operator==(const Monomial&) const = default;

private:
  std::vector<Factor> factors_;
};

/// Lexicographic order with smaller atom ids more significant.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial over the rationals.
class Polynomial {
public:
  using Terms = std::map<Monomial, Rational, MonomialLess>;

  Polynomial() = default;
  Polynomial(const Rational& c);
  static Polynomial atom(AtomId id);
  static Polynomial term(const Monomial& m, const Rational& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational constant_value() const;
  std::size_t size() const { return terms_.size(); }

  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

  /// Sorted list of atoms occurring in some term.
  std::vector<AtomId> atoms() const;
  std::uint32_t degree_in(AtomId id) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;
  Polynomial pow(unsigned exponent) const;

  /// Formal partial derivative with respect to an atom.
  Polynomial derivative(AtomId id) const;

  /// Coefficients as a univariate polynomial in `id`, index = degree.
  std::vector<Polynomial> coefficients_in(AtomId id) const;
  static Polynomial from_coefficients(AtomId id, const std::vector<Polynomial>& coeffs);

  /// Scales so that the leading coefficient is one.
  Polynomial monic() const;
  /// gcd of all monomials occurring.
  Monomial monomial_content() const;

  bool operator==(const Polynomial&) const = default;

  /// Adds c*m in place.
  void add_term(const Monomial& m, const Rational& c);

private:
  Terms terms_;
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

/// Monic greatest common divisor (zero only when both inputs are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

} // namespace diffiety
