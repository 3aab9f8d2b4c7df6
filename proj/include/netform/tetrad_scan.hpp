#pragma once
// Tetrad enumeration into cell tables. All 4-agent subsets are visited; each
// of the three pairings of a quadruplet yields two oriented tetrads whose
// pattern / flipped observations accumulate into cells matched exactly on the
// canonical dyadic covariate quadruple (Z_ij, Z_hk, Z_ik, Z_jh).

#include "netform/criterion.hpp"
#include "netform/equilibrium.hpp"

namespace netform {

// Requires a draw with discrete scalar agent characteristics (z_support).
// beta is folded into the record 'a' components.
BoundTable scan_tetrads(const SimDraw& draw, const std::vector<double>& beta,
                        std::uint64_t cell_min_hint = 0);

// Pattern indicators and the index contrast for one oriented tetrad.
struct TetradTerms {
  bool tetrad_pattern = false;
  bool flipped = false;
  double delta_contrast = 0.0;
};
TetradTerms tetrad_indicator_terms(const SimDraw& draw, int i, int j, int h,
                                   int k, const Theta& theta);

// Shock contrast matching the surplus convention of the simulator: the
// pattern event forces shock_contrast < delta_contrast at the true theta.
double tetrad_shock_contrast(const ShockMatrix& shocks, int i, int j, int h,
                             int k);

}  // namespace netform
