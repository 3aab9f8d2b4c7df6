#pragma once
// Endogenous dyadic covariates phi_ij(Y, Z) and their structural-property
// checks (local externality, boundedness, comparison-pattern invariance).

#include <functional>
#include <optional>

#include "netform/core.hpp"

namespace netform {

enum class CovariateKind { CommonFriends, Jaccard, Custom };

struct CovariateSpec {
  CovariateKind kind = CovariateKind::Jaccard;
  // Componentwise value range; custom covariates must declare theirs.
  double lo = 0.0;
  double hi = 1.0;
  std::function<double(const Network&, int, int)> custom;

  static CovariateSpec common_friends(int n) {
    return {CovariateKind::CommonFriends, 0.0, static_cast<double>(n - 2), {}};
  }
  static CovariateSpec jaccard() {
    return {CovariateKind::Jaccard, 0.0, 1.0, {}};
  }
  static CovariateSpec custom_fn(
      std::function<double(const Network&, int, int)> f, double lo, double hi) {
    return {CovariateKind::Custom, lo, hi, std::move(f)};
  }

  double value(const Network& net, int i, int j) const;
};

// Number of common friends: sum over k != i,j of Y_ik Y_jk.
int common_friends(const Network& net, int i, int j);

// |N(i) and N(j)| / |N(i) or N(j)|; 0 when both neighborhoods are empty.
double jaccard(const Network& net, int i, int j);

// Fills the full symmetric X table. Custom values outside the declared
// range raise.
void compute_all(const Network& net, const CovariateSpec& spec,
                 DyadCovariates& dyads);

// True iff toggling any link not incident to (i, j) leaves X_ij unchanged,
// for every pair and every such link. Exhaustive; intended for small n.
bool check_local_externality(const CovariateSpec& spec, const Network& net);

// Comparison-pattern invariance on an admissible tetrad (both diagonals
// absent): each tetrad-link covariate must coincide under the tetrad pattern
// and the flipped pattern, holding non-tetrad links fixed.
bool check_cpi(const CovariateSpec& spec, const Network& net, int i, int j,
               int h, int k);

}  // namespace netform
