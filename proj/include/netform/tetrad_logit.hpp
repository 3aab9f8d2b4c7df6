#pragma once
// Point-identification pipeline: admissible-tetrad selection, pattern
// classification, contrast regressors and conditional-logit maximum
// likelihood, plus the analytic log-odds identities used as oracles.

#include <optional>
#include <string>

#include "netform/equilibrium.hpp"
#include "netform/strategic.hpp"

namespace netform {

enum class TetradOutcome { TetradPattern, Flipped, Neither };

struct AdmissibleTetrad {
  std::array<int, 4> agents{};  // (i, j, h, k)
  bool isolated = false;
  TetradOutcome outcome = TetradOutcome::Neither;
  std::vector<double> dz;  // Z_ij + Z_hk - Z_ik - Z_jh
  std::vector<double> dx;  // X analog, realized values
};

struct SelectOptions {
  bool require_isolation = false;
  // Full enumeration up to this n; beyond it a seeded subsample of
  // quadruplets is scanned.
  int full_enumeration_max_n = 300;
  std::size_t subsample = 5'000'000;
  std::uint64_t subsample_seed = 17;
};

// All canonical quadruplet pairings with both diagonal links absent.
// Neither-outcome tetrads are retained but flagged.
std::vector<AdmissibleTetrad> select_admissible(
    const SimDraw& draw, const StrategicNeighborhoods* nbhds,
    const SelectOptions& opt = {});

struct LogitFit {
  std::vector<double> theta;  // (beta..., gamma...) stacked
  double loglik = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
  std::vector<double> std_err;
  int dz_dim = 0;
  int dx_dim = 0;
};

// Conditional logit over tetrad (y=1) vs flipped (y=0) outcomes with
// regressors (dz, dx). Damped Newton, gradient tolerance 1e-8. Raises on
// rank-deficient designs (naming the deficient columns) and on perfect
// separation.
LogitFit fit_conditional_logit(const std::vector<AdmissibleTetrad>& tetrads);

// Exact log-odds of the tetrad vs flipped pattern given the four link
// thresholds; equals t0 + t1 - t2 - t3 identically.
struct LogOdds {
  double p_plus = 0.0;
  double p_minus = 0.0;
  double log_odds = 0.0;
};
LogOdds logodds_oracle(double t_ij, double t_hk, double t_ik, double t_jh);

// For a draw with the common-friends covariate: enumerate admissible tetrads,
// freeze the rest of the network, and verify that the product-formula
// log-odds equals dZ'beta + dX'gamma for every tetrad. Returns the worst
// absolute identity gap.
struct LogOddsReport {
  std::size_t checked = 0;
  double worst_gap = 0.0;
};
LogOddsReport verify_logodds_identity(const SimDraw& draw, const Theta& theta);

}  // namespace netform
