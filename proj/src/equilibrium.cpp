#include "netform/equilibrium.hpp"

#include <cmath>

namespace netform {

void DgpSpec::validate() const {
  if (n < 4) throw std::invalid_argument("DgpSpec: n < 4");
  if (model == Model::Baseline && (fe.sigma_a != 0 || fe.rho != 0))
    throw std::invalid_argument("DgpSpec: baseline has no fixed effects");
  if (model != Model::Full && z_dim != 2)
    throw std::invalid_argument("DgpSpec: baseline/fe-only use z_dim == 2");
  if (model == Model::Full && z_dim != 1)
    throw std::invalid_argument("DgpSpec: full model uses scalar z");
}

void draw_primitives(const DgpSpec& spec, Rng& rng, AgentData& agents,
                     ShockMatrix& shocks) {
  const int n = spec.n;
  agents.n = n;
  agents.z_dim = spec.z_dim;
  agents.z.resize(static_cast<std::size_t>(n) * spec.z_dim);
  agents.a.assign(n, 0.0);
  agents.z_support.clear();

  if (spec.z_support > 0) {
    const int m = spec.z_support;
    const double step = m > 1 ? 20.0 / (m - 1) : 0.0;
    for (int g = 0; g < m; ++g) agents.z_support.push_back(-10.0 + step * g);
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < spec.z_dim; ++d)
        agents.z[static_cast<std::size_t>(i) * spec.z_dim + d] =
            agents.z_support[rng.uniform_int(m)];
    if (spec.z_dim != 1) agents.z_support.clear();
  } else {
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < spec.z_dim; ++d)
        agents.z[static_cast<std::size_t>(i) * spec.z_dim + d] =
            rng.uniform(-10.0, 10.0);
  }

  if (spec.model != Model::Baseline) {
    for (int i = 0; i < n; ++i)
      agents.a[i] = spec.fe.rho * agents.zv(i, 0) + spec.fe.sigma_a * rng.normal();
  }

  shocks.n = n;
  shocks.eps.resize(pair_count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) shocks.at(i, j) = rng.logistic();
}

namespace {

double link_surplus(const SimDraw& d, const Theta& theta,
                    const CovariateSpec& cov, bool use_x, int i, int j) {
  double s = d.dyads.z_index(i, j, theta.beta);
  if (use_x) s += theta.gamma[0] * cov.value(d.network, i, j);
  s += d.agents.a[i] + d.agents.a[j];
  s += d.shocks(i, j);
  return s;
}

}  // namespace

SimDraw solve_equilibrium(const AgentData& agents, const ShockMatrix& shocks,
                          const Theta& theta, const DgpSpec& spec,
                          std::optional<Network> start) {
  const int n = agents.n;
  const bool use_x = spec.model == Model::Full;
  if (use_x && theta.gamma.empty())
    throw std::invalid_argument("solve_equilibrium: full model needs gamma");

  SimDraw d;
  d.agents = agents;
  d.shocks = shocks;
  d.network = start ? *start : Network(n);
  d.dyads = build_dyad_z(agents, spec.dyad_kind);
  d.theta = theta;

  for (int sweep = 0; sweep < spec.sweep_cap; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const bool want = link_surplus(d, theta, spec.covariate, use_x, i, j) >= 0.0;
        if (want != d.network.link(i, j)) {
          d.network.set_link(i, j, want);
          changed = true;
        }
      }
    d.sweeps = sweep + 1;
    if (!changed) {
      d.converged = true;
      break;
    }
  }

  if (use_x) {
    compute_all(d.network, spec.covariate, d.dyads);
    d.has_x = true;
  } else {
    d.dyads.x_dim = 0;
    d.dyads.x.clear();
  }
  return d;
}

SimDraw simulate(const DgpSpec& spec, std::uint64_t seed) {
  Rng rng(derive_seed(spec.seed, seed));
  AgentData agents;
  ShockMatrix shocks;
  draw_primitives(spec, rng, agents, shocks);
  return solve_equilibrium(agents, shocks, spec.theta0(), spec);
}

bool verify_pairwise_stability(const SimDraw& draw, const Theta& theta,
                               const DgpSpec& spec) {
  const bool use_x = spec.model == Model::Full;
  for (int i = 0; i < draw.agents.n; ++i)
    for (int j = i + 1; j < draw.agents.n; ++j) {
      const bool want =
          link_surplus(draw, theta, spec.covariate, use_x, i, j) >= 0.0;
      if (want != draw.network.link(i, j)) return false;
    }
  return true;
}

AgentData negate_fixed_effects(const AgentData& agents) {
  AgentData out = agents;
  for (double& v : out.a) v = -v;
  return out;
}

}  // namespace netform
