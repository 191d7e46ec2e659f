#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "diffiety/form_span.hpp"

namespace diffiety {

/// Least L with Ker_D Omega_{l+1} = Omega_l for L <= l <= l_cap. The default
/// cap is 2 * (max seed level) + 4. Throws NotStabilized.
int find_L(const Diffiety& d, std::optional<int> l_cap = std::nullopt);

/// Best-effort exact basis dt^r of a flat span.
struct Potentials {
  std::optional<std::vector<Expr>> functions;
  std::string status;
};

/// Polynomial first integrals of degree <= max_degree whose differentials span r.
Potentials exact_potentials(const FormSpan& r, int max_degree = 3);

struct ResidualModule {
  FormSpan span;
  int L = 0;
  int K = 0;
  bool flat = false;
  Potentials potentials;
};

/// Iterated kernels Omega_L, Ker_D Omega_L, ..., down to the fixed point R0.
struct StandardFiltration {
  std::shared_ptr<const Diffiety> diffiety;
  int L = 0;
  int K = 0;
  std::vector<FormSpan> kernels; // kernels[k] = Ker_D^k Omega_L, k = 0..K

  const FormSpan& residual() const { return kernels.back(); }
  /// Level l of the standard filtration.
  FormSpan level(int l) const;
};

StandardFiltration standard_filtration(const Diffiety& d, std::optional<int> l_cap = std::nullopt);
ResidualModule residual_module(const Diffiety& d, std::optional<int> l_cap = std::nullopt);
ResidualModule residual_module(const StandardFiltration& f);
bool is_controllable(const Diffiety& d);

struct InitialForm {
  OneForm form;
  int entry_level = 0;
};

/// Coefficients of a form over the cobasis {dx, tau^r, pi^j_s}.
struct StandardExpansion {
  Expr dx;
  std::vector<Expr> tau;
  std::vector<std::vector<Expr>> pi; // pi[j][s]
};

struct DiffietyStats {
  int mu = 0;
  int dim_r0 = 0;
  int L = 0;
  int K = 0;
  int nu = 0;
};

/// Residual forms tau^r, initial forms pi^j_0 and chains pi^j_s = L_D^s pi^j_0.
class StandardBasis {
public:
  StandardBasis(StandardFiltration filtration, std::vector<OneForm> tau, std::vector<InitialForm> initial);

  const Diffiety& diffiety() const { return *filtration_.diffiety; }
  const StandardFiltration& filtration() const { return filtration_; }
  const std::vector<OneForm>& tau() const { return tau_; }
  const std::vector<InitialForm>& initial_forms() const { return initial_; }
  std::size_t mu() const { return initial_.size(); }
  DiffietyStats stats() const;

  /// pi^j_s, cached.
  OneForm chain(std::size_t j, int s) const;
  /// tau, then pi^j_s with s <= order, chain by chain.
  std::vector<OneForm> forms_up_to(int order) const;
  /// Expansion of theta over {dx, tau, pi^j_s : s <= order}; TruncationOverflow
  /// when theta is not in that span.
  StandardExpansion expand(const OneForm& theta, int order) const;

private:
  StandardFiltration filtration_;
  std::vector<OneForm> tau_;
  std::vector<InitialForm> initial_;
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, int>, OneForm> chains;
    std::map<int, FormSpan> cobases;
  };
  /// Span of dx, tau and the chains up to a filtration level, generators in that order.
  const FormSpan& cobasis_span(int level) const;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

StandardBasis standard_basis(const Diffiety& d, std::optional<int> l_cap = std::nullopt);
StandardBasis standard_basis(const StandardFiltration& f);

} // namespace diffiety
