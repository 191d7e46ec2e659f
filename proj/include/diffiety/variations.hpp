#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffiety/standard_filtration.hpp"

namespace diffiety {

/// Components of a variation in the standard frame: Z = zD + sum zr^r d/dt^r
/// + sum_s D^s p^j d/dpi^j_s. zr entries are written in the symbols t1, t2, ...
/// standing for the residual potentials.
struct VariationSpec {
  Expr z;
  std::vector<Expr> p;
  std::vector<Expr> zr;
};

struct VariationCheck {
  bool ok = true;
  std::optional<AtomId> failing; // first coordinate whose generator fails
  Expr defect;                    // (L_D omega)(Z) - D(omega(Z)) there
};

/// Checks (L_D omega)(Z) = D(omega(Z)) on the contact forms of all coordinates
/// of seed level <= order.
VariationCheck check_variation(const Diffiety& d, const VectorField& z, int order);
bool is_variation(const Diffiety& d, const VectorField& z, int order);

/// Copy of z whose unassigned chain coordinates follow the variation rule
/// Z c_{s+1} = D(Z c_s) - c_{s+1} D(Zx).
VectorField prolonged(const Diffiety& d, const VectorField& z);

/// Symbol standing for the r-th residual potential in zr entries (r from 1).
Expr potential_symbol(std::size_t r);

/// Coordinate components of the spec field on the seed window of the given
/// order, prolonged beyond it.
VectorField variation_from_spec(const StandardBasis& b, const VariationSpec& spec, int order);

struct EvolutionalGenerator {
  AtomId coordinate;
  OneForm form; // omega(Z) dt - omega
};

struct EvolutionalDiffiety {
  AtomId t;
  std::vector<EvolutionalGenerator> generators;
  VectorField E; // Z + d/dt
};

/// Throws NotAVariation when z fails the check at the order.
EvolutionalDiffiety evolutional_generators(const Diffiety& d, const VectorField& z, int order);

/// Ansatz L_Z pi^j_0 = sum over k in support of lambda_k pi^k_0.
struct AnsatzTarget {
  std::size_t chain = 0;
  std::vector<std::size_t> support;
};

struct DeterminingSystem {
  std::vector<Expr> constraints;
  std::map<std::string, Expr> solved;
};

/// Builds Z from the spec formula with unknown z and zero zr, eliminates z
/// through the pi^j_1 coefficient of the first target and the multipliers
/// through their pi^k_0 coefficients, and returns what is left.
DeterminingSystem determining_system(const StandardBasis& b, const std::vector<AnsatzTarget>& ansatz,
                                     const std::vector<Expr>& p, int order);

} // namespace diffiety
