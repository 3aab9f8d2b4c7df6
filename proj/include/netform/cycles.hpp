#pragma once
// Weighted-configuration scans beyond the tetrad: triads, the weighted star,
// sampled alternating hexads, a generic engine for arbitrary slot templates,
// and aggregation over configuration classes.

#include "netform/criterion.hpp"
#include "netform/equilibrium.hpp"
#include "netform/tetrad_scan.hpp"

namespace netform {

enum class ConfigClass {
  Tetrad,
  ThreeLinkTriad,
  TwoLinkTriad,
  WeightedStar,
  Hexad,
};

const char* config_name(ConfigClass c);

struct CycleScanOptions {
  std::uint64_t hexad_samples = 1'000'000;
  std::uint64_t hexad_seed = 7;
};

// Accumulates pattern / flipped observations for one configuration class.
// Cells are matched exactly: retained agents' characteristics key the outer
// groups, profiled characteristics key the inner cells (dyadic covariate
// vectors for the complete-elimination configurations).
BoundTable scan_config(const SimDraw& draw, ConfigClass cls,
                       const std::vector<double>& beta,
                       const CycleScanOptions& opt = {});

// Generic engine: the configuration is a template over agent slots
// 0..m-1 (links/weights refer to slots). Enumerates each physical instance
// once (lexicographically minimal assignment modulo template automorphisms).
// Emits a warning flag instead of bounds-only refusal when the template has
// no differenced-out agents (such configurations cannot eliminate their
// nuisance CDF).
struct GeneralBoundResult {
  std::string config_name;
  bool no_differencing_warning = false;
  BoundTable table;
  double c = 0.0;
  std::vector<CellBounds> bounds;  // p_L / p_U per cell at the given (gamma, c)
};
GeneralBoundResult general_cycle_bounds(const SimDraw& draw,
                                        const WeightedLinkConfig& slot_template,
                                        const std::string& name,
                                        const std::vector<double>& beta,
                                        double gamma, double c,
                                        std::uint64_t cell_min);

// Theorem-style aggregation: theta is retained iff the max over member
// configurations of the per-configuration criterion is non-positive.
struct AggregateResult {
  double q = -1.0;
  bool in_identified_set = true;
  std::string binding_config;
};
AggregateResult aggregate_criterion(const std::vector<BoundTable>& tables,
                                    double gamma,
                                    const CriterionOptions& opt = {});

std::vector<BoundTable> scan_class_set(const SimDraw& draw,
                                       const std::vector<ConfigClass>& classes,
                                       const std::vector<double>& beta,
                                       const CycleScanOptions& opt = {});

}  // namespace netform
