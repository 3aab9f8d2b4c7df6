#pragma once
// Cell tables of pattern / flipped-pattern observations and the criterion
// sweep that turns them into Q values and identified sets.
//
// A record's index contrast is affine in the single free parameter:
//   Delta(gamma) = a + gamma * b
// with a = sum_e w_e z_e'beta (beta fixed at scan time) and b = sum_e w_e x_e.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "netform/fdelta.hpp"

namespace netform {

struct BoundRecord {
  double a = 0.0;
  double b = 0.0;
};

// One exactly-matched covariate cell (inner, profiled-over level).
struct ProfileCell {
  std::vector<double> key;  // profiled z values, canonical order
  std::uint64_t count = 0;
  std::vector<BoundRecord> pat;
  std::vector<BoundRecord> flip;
};

// One retained-characteristics group (outer level). Tetrad and hexad tables
// have a single group with an empty key: every fixed effect is differenced
// out and the cells play the role of the dyadic-covariate conditioning.
struct RetainedGroup {
  std::vector<double> key;  // retained agents' z values
  std::vector<ProfileCell> cells;
};

struct BoundTable {
  std::string config_name;
  std::vector<double> beta;  // beta the records were folded with
  std::vector<RetainedGroup> groups;

  std::size_t total_records() const;
  std::size_t active_cells(std::uint64_t cell_min) const;
};

struct CriterionOptions {
  std::uint64_t cell_min = 10;
  // Quantile levels of F_Delta appended to the realized-breakpoint grid for
  // the parametric criterion.
  double quantile_lo = 0.01;
  double quantile_step = 0.01;
  // Floor applied to F_Delta: differences below solver accuracy are noise.
  double f_floor = 1e-9;
};

struct CriterionResult {
  double q = -std::numeric_limits<double>::infinity();
  bool in_identified_set = true;  // q <= 0
  double binding_c = 0.0;
  std::string binding_cell;
  bool lower_side = true;  // whether the sup came from the p_L side
};

// Q = sup_c [ sup_cell p_L(cell, c) - inf_cell p_U(cell, c) ], per retained
// group, maximized over groups. Exact over continuous c (the sup sits at
// realized breakpoints).
CriterionResult criterion_nonparametric(const BoundTable& table, double gamma,
                                        const CriterionOptions& opt = {});

// Q = sup_c max( sup_cell p_L - F(c), F(c) - inf_cell p_U ), with F known.
CriterionResult criterion_parametric(const BoundTable& table, double gamma,
                                     const DeltaDistribution& fdelta,
                                     const CriterionOptions& opt = {});

// Per-cell p_L / p_U values at a fixed c, for diagnostics and tests.
struct CellBounds {
  std::vector<double> cell_key;
  std::vector<double> group_key;
  std::uint64_t count = 0;
  double p_lower = 0.0;
  double p_upper = 1.0;
};
std::vector<CellBounds> evaluate_bounds(const BoundTable& table, double gamma,
                                        double c, std::uint64_t cell_min);

// Identified-set summary over a gamma grid.
struct GridPoint {
  double gamma;
  double q;
  bool in_set;
};
struct IdentifiedSet {
  std::vector<GridPoint> points;
  // Connected runs of in-set grid points, reported as [lo, hi] plus
  // open-at-boundary flags when a run touches the grid edge.
  struct Interval {
    double lo, hi;
    bool open_lo, open_hi;
  };
  std::vector<Interval> intervals;
  bool empty() const { return intervals.empty(); }
};
IdentifiedSet summarize_grid(const std::vector<GridPoint>& points);

}  // namespace netform
