#pragma once
// Criterion evaluation for the analytic modes: link probabilities in closed
// form (baseline) or by Monte Carlo integration over fixed effects (FE-only),
// with the sup over agent characteristics taken by seeded multistart
// Nelder-Mead over the continuous [-10,10]^2-per-agent domain.

#include <array>
#include <cstdint>

#include "netform/criterion.hpp"
#include "netform/fdelta.hpp"

namespace netform {

struct ClosedFormSpec {
  double gamma0 = 1.0;     // true coefficient on the second z component
  bool fe = false;         // integrate fixed effects
  double sigma_a = 0.0;
  double rho = 0.0;
  std::size_t mc_draws = 100'000;   // A draws (FE mode)
  std::size_t search_draws = 20'000;  // reduced draws inside the search
  std::uint64_t mc_seed = 99;
  int starts = 32;                  // multistart count
  std::uint64_t start_seed = 4242;
  int nm_iters = 220;
  CriterionOptions crit;
};

// Parametric tetrad criterion Q(gamma): max violation of
//   p_L(zeta, c) <= F(c) <= p_U(zeta, c)
// over agent configurations (z_i, z_j, z_h, z_k) in [-10,10]^8 and c on the
// quantile-plus-breakpoint grid. Q <= 0 marks gamma as not refuted.
double closed_form_q(const ClosedFormSpec& spec, double gamma,
                     const DeltaDistribution& fdelta);

// Pattern and flipped probabilities plus the candidate index contrast for a
// single configuration (exposed for tests).
struct ClosedFormPoint {
  double p_pattern = 0.0;
  double p_flipped = 0.0;
  double delta_candidate = 0.0;
};
ClosedFormPoint closed_form_point(const ClosedFormSpec& spec,
                                  const std::array<double, 8>& coords,
                                  double gamma);

// Identified set on a gamma grid.
IdentifiedSet closed_form_identified_set(const ClosedFormSpec& spec,
                                         const DeltaDistribution& fdelta,
                                         double lo, double hi, double step);

}  // namespace netform
