#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffiety/linalg.hpp"
#include "diffiety/one_form.hpp"

namespace diffiety {

/// theta = sum coefficients[i] * basis()[i] + remainder.
struct MembershipCertificate {
  std::vector<Expr> coefficients;
  OneForm remainder;
  bool member() const { return remainder.is_zero(); }
};

/// Span of one-forms over the expression field with a cached echelon.
class FormSpan {
public:
  FormSpan(const Diffiety& d, std::vector<OneForm> generators);

  const Diffiety& diffiety() const { return *diffiety_; }
  const std::vector<OneForm>& generators() const { return generators_; }
  /// Echelon rows as forms: independent, pivot coefficient one.
  const std::vector<OneForm>& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  /// Pivot coordinate of each basis form.
  std::vector<AtomId> pivot_coordinates() const;

  MembershipCertificate reduce(const OneForm& theta) const;
  bool contains(const OneForm& theta) const { return reduce(theta).member(); }
  /// Coefficients of theta over generators(), when theta is a member.
  std::optional<std::vector<Expr>> expand(const OneForm& theta) const;

  /// Span over the expression field of this span and more forms.
  FormSpan extended(const std::vector<OneForm>& more) const;

private:
  using Ech = Echelon<Expr>;
  Ech::Vector to_vector(const OneForm& theta) const;
  OneForm to_form(const Ech::Vector& v) const;

  std::shared_ptr<const Diffiety> diffiety_;
  std::vector<OneForm> generators_;
  std::vector<AtomId> columns_;
  std::shared_ptr<Ech> echelon_;
  std::vector<OneForm> basis_;
};

/// Forms theta in span with L_D theta again in the span.
FormSpan ker_D(const FormSpan& theta);
/// Same with L_Z in place of L_D.
FormSpan ker_along(const FormSpan& theta, const VectorField& z);
bool span_equal(const FormSpan& a, const FormSpan& b);
/// True when every d(theta) lies in the ideal generated by the span.
bool flatness_check(const FormSpan& s);

/// Seed level Omega_l = span{omega{c} : level(c) <= l + shift}.
FormSpan seed_span(const Diffiety& d, int l);

struct FiltrationCheck {
  struct Level {
    int level;
    bool contained;   // L_D Omega_l inside Omega_{l+1}
    bool generating;  // Omega_l + L_D Omega_l = Omega_{l+1}
  };
  std::vector<Level> levels;
  bool good = false;
  std::optional<int> first_failure;
  /// Least level from which generation holds through l_max.
  std::optional<int> equality_from;
};

FiltrationCheck check_good_filtration(const Diffiety& d, int l_max);

} // namespace diffiety
