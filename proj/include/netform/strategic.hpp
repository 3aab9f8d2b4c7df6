#pragma once
// Link robustness classification, strategic neighborhoods and greedy packing
// of tetrads with pairwise-disjoint dependence sets.

#include <optional>

#include "netform/core.hpp"
#include "netform/covariates.hpp"
#include "netform/equilibrium.hpp"

namespace netform {

struct SurplusBounds {
  double v_sup = 0.0;
  double v_inf = 0.0;
};

// Extrema of the link surplus over the covariate box [lo, hi]^dx. The surplus
// is affine in x, so the extrema sit at box corners.
SurplusBounds surplus_bounds(double base_index, const std::vector<double>& gamma,
                             const std::vector<double>& lo,
                             const std::vector<double>& hi);

struct RobustnessGraphs {
  int n = 0;
  std::vector<std::uint8_t> d;   // non-robust indicator, pair-indexed
  std::vector<std::uint8_t> pi;  // robustly-present indicator, pair-indexed
  bool nonrobust(int i, int j) const { return d[pair_index(n, i, j)]; }
  bool robust_present(int i, int j) const { return pi[pair_index(n, i, j)]; }
};

// D_ij = 1{v_sup >= 0} 1{v_inf < 0}; Pi_ij = 1{v_inf >= 0}, using the
// simulator's surplus convention (link iff surplus >= 0).
RobustnessGraphs classify_links(const AgentData& agents,
                                const ShockMatrix& shocks, const Theta& theta,
                                const DyadCovariates& dyads,
                                const CovariateSpec& cov);

struct StrategicNeighborhoods {
  int n = 0;
  std::vector<int> component;                // component id per agent (in D)
  std::vector<std::vector<int>> members;     // agents per component id
  std::vector<std::vector<int>> closure;     // C_i^+ per agent, sorted
  const std::vector<int>& comp_of(int i) const { return members[component[i]]; }
};

StrategicNeighborhoods strategic_neighborhoods(const RobustnessGraphs& g);

struct PackedTetrads {
  std::vector<std::array<int, 4>> tetrads;
  std::vector<std::vector<int>> dependence_sets;  // sorted agent lists
};

// Greedy lexicographic packing: a candidate quadruplet is selected iff its
// dependence set (union of the members' strategic neighborhoods) is disjoint
// from every previously selected one. Optional exact z-profile filter.
PackedTetrads greedy_pack_tetrads(
    const StrategicNeighborhoods& nbhds,
    const std::optional<std::array<double, 4>>& z_match = std::nullopt,
    const AgentData* agents = nullptr);

// True iff each tetrad member's non-robustness component stays inside the
// tetrad.
bool check_tetrad_isolation(const StrategicNeighborhoods& nbhds, int i, int j,
                            int h, int k);

}  // namespace netform
