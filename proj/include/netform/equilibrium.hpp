#pragma once
// Data-generating processes for the three simulation specifications and the
// best-response iteration that produces a pairwise-stable network.
//
// Link rule used throughout the simulator:
//   Y_ij = 1{ z_ij'beta + x_ij'gamma + A_i + A_j + eps_ij >= 0 }.
// Fixed effects enter additively on the surplus side here; the threshold-side
// convention is recovered by negate_fixed_effects().

#include <cstdint>
#include <optional>

#include "netform/core.hpp"
#include "netform/covariates.hpp"

namespace netform {

enum class Model { Baseline, FeOnly, Full };

struct FeSpec {
  double sigma_a = 0.0;
  double rho = 0.0;
};

struct DgpSpec {
  Model model = Model::Full;
  int n = 100;
  double gamma0 = 4.0;
  std::vector<double> beta0 = {1.0};
  int z_dim = 1;          // individual characteristic dimension
  int z_support = 21;     // grid size over [-10,10]; 0 = continuous uniform
  FeSpec fe;
  CovariateSpec covariate = CovariateSpec::jaccard();
  DyadKind dyad_kind = DyadKind::AbsDiff;
  std::uint64_t seed = 1;
  int sweep_cap = 100;

  Theta theta0() const {
    if (model == Model::Full) return {beta0, {gamma0}};
    // Baseline / FeOnly: gamma0 multiplies the second z component
    std::vector<double> b = beta0;
    b.push_back(gamma0);
    return {b, {}};
  }
  void validate() const;
};

struct SimDraw {
  AgentData agents;
  ShockMatrix shocks;
  Network network;
  DyadCovariates dyads;    // z filled at draw time; x filled by the solver
  bool converged = false;
  int sweeps = 0;
  Theta theta;             // parameters the network was solved under
  bool has_x = false;
};

// Z_i sampled from the spec support (uniform grid over [-10,10] when
// z_support > 0, else continuous uniform); A_i ~ N(rho * Z_1i, sigma_a^2);
// eps_ij iid Logistic(0,1).
void draw_primitives(const DgpSpec& spec, Rng& rng, AgentData& agents,
                     ShockMatrix& shocks);

// Asynchronous lexicographic best-response sweeps from the empty network,
// recomputing X_ij just before each pair update. Stops when a full sweep
// changes nothing; flagged unconverged at the sweep cap.
SimDraw solve_equilibrium(const AgentData& agents, const ShockMatrix& shocks,
                          const Theta& theta, const DgpSpec& spec,
                          std::optional<Network> start = std::nullopt);

// Convenience: primitives + equilibrium for a given seed stream.
SimDraw simulate(const DgpSpec& spec, std::uint64_t seed);

// Recomputes X from the final network and checks the link rule pairwise.
bool verify_pairwise_stability(const SimDraw& draw, const Theta& theta,
                               const DgpSpec& spec);

// Threshold-side reparametrization (A~ = -A): returns agents with negated
// fixed effects so the rule reads z'b + x'g >= A_i + A_j + eps.
AgentData negate_fixed_effects(const AgentData& agents);

}  // namespace netform
