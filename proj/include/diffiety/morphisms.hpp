#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffiety/standard_filtration.hpp"

namespace diffiety {

/// Pullback table of a morphism of a diffiety into itself: m*x = X and
/// m*c for base coordinates, plus the chain entries filled by prolongation.
struct MorphismSpec {
  Expr X;
  std::map<AtomId, Expr> images;
  int order = 0; // chains are filled up to this index
};

/// Fills m*c[s+1] = D(m*c[s]) / D(m*x) for every chain up to the order.
/// Entries already present are kept. Throws SingularJacobian unless D(m*x)
/// is a nonzero constant or nonzero by assumption, and MalformedInput when a
/// chain base or a single has no image.
MorphismSpec prolong(const Diffiety& d, MorphismSpec spec, int order);

/// m*f; throws TruncationOverflow when f uses a chain coordinate without image.
Expr pullback(const Diffiety& d, const MorphismSpec& m, const Expr& f);
/// sum m*(a_c) d(m*c) + m*(a_x) d(m*x).
OneForm pullback(const Diffiety& d, const MorphismSpec& m, const OneForm& theta);

struct MorphismCheck {
  bool ok = true;
  std::optional<AtomId> failing;
  OneForm remainder;
};

/// Pullbacks of the seed generators up to the order must lie in Omega.
MorphismCheck check_morphism(const Diffiety& d, const MorphismSpec& m, int order);
bool is_morphism(const Diffiety& d, const MorphismSpec& m, int order);

/// (m2 o m1)* = m1* o m2*. Keeps the entries of m2 whose pullback through m1
/// is defined; the order drops to what both tables support.
MorphismSpec compose(const Diffiety& d, const MorphismSpec& m2, const MorphismSpec& m1);

struct SymmetryReport {
  bool residual_ok = false;
  std::vector<bool> initial_forms_recovered;
  int verified_to = 0;
  /// True when every check passed; false means "not verified up to the order".
  bool verified() const;
};

/// m*R0 = R0 and pi^j_0 in span{m*tau, m*pi^k_s : s <= order}. Throws
/// MalformedInput when m is not a morphism at the order.
SymmetryReport symmetry_criterion(const StandardBasis& b, const MorphismSpec& m, int order);

/// Candidate solutions of the implicit systems V = DV = ... = D^m V = 0 and
/// V = Db V = ... = Db^m V = 0 on the jet space with m chains and its barred copy.
struct WaveData {
  Expr V;
  int m = 1;
  std::map<AtomId, Expr> forward;  // xbar, wbar^j[0] in terms of x, w^j[r]
  std::map<AtomId, Expr> backward; // x, w^j[0] in terms of xbar, wbar^j[r]
};

/// Jet space M(m) with chains w (m = 1) or w1..wm, and its barred copy with
/// independent xbar and chains wbar or wbar1..wbarm.
Diffiety wave_space(int m, bool barred);

struct WaveIdentity {
  std::string label;
  bool holds = false;
  Expr residual;
};

struct WaveReport {
  std::vector<WaveIdentity> identities; // forward k = 0..m, then backward
  bool forward_jacobian_nonzero = false;
  bool backward_jacobian_nonzero = false;
  bool all_hold() const;
};

WaveReport wave_check(const WaveData& data);

} // namespace diffiety
