#pragma once

#include <string>
#include <vector>

#include "diffiety/standard_filtration.hpp"

namespace diffiety {

/// phi_breve = f dx + correction with d phi_breve = sum e^j pi^j_0 ^ dx mod Omega^Omega.
struct PoincareCartanData {
  OneForm correction;
  OneForm pc_form;
  std::vector<Expr> el_coefficients;
  /// sum e^j pi^j_0, the Omega-factor of d phi_breve.
  OneForm el_form;
};

/// Integration by parts on the standard basis. Throws NotControllable when
/// the residual module is nonzero and TruncationOverflow past the order cap.
PoincareCartanData poincare_cartan(const StandardBasis& b, const OneForm& phi);
PoincareCartanData poincare_cartan(const StandardBasis& b, const Expr& f);
std::vector<Expr> euler_lagrange(const StandardBasis& b, const OneForm& phi);
std::vector<Expr> euler_lagrange(const StandardBasis& b, const Expr& f);

struct NoetherCharge {
  Expr charge;               // phi_breve(Z)
  bool constant_on_extremals = false;
  std::string note;          // why constancy was not certified, when it was not
};

/// Checks L_Z Omega in Omega and L_Z(f dx) in Omega to the order, then returns
/// phi_breve(Z) and reduces D(charge) by the solved Euler-Lagrange equations
/// and their total derivatives up to the order.
NoetherCharge noether_charge(const StandardBasis& b, const Expr& f, const VectorField& z, int order);

/// Reduces g by solving each D^k e^j = 0 (k <= order) for its leading chain
/// coordinate. Returns nullopt when some e^j has no usable leader.
std::optional<Expr> reduce_on_extremals(const Diffiety& d, const std::vector<Expr>& e, const Expr& g, int order);

/// Chains u, v and the single w with Dw = F. a is added to the assumptions
/// when it is not constant.
Diffiety constrained_problem(const Expr& F);

struct ClosedFormData {
  Expr a, b, A, B, e1, e2;
  OneForm pc_form;           // reference form, with -(b/a) gamma
  OneForm pc_form_consistent; // +(b/a) gamma, the sign satisfying the two-form identity
  /// gamma - F_u1 alpha - F_v1 beta and alpha, the frame the closed-form e1, e2 refer to.
  std::vector<OneForm> frame;
  OneForm el_form; // e1 frame[0] + e2 frame[1]
};

/// Closed-form data of the constrained problem with constraint
/// Dw = F and Lagrangian f. Throws DegenerateConstraint unless a is certified nonzero.
ClosedFormData closed_form_problem(const Expr& F, const Expr& f);

} // namespace diffiety
