#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netform/equilibrium.hpp"

using namespace netform;

namespace {

DgpSpec full_spec(int n, int zs, double gamma0, std::uint64_t seed) {
  DgpSpec s;
  s.model = Model::Full;
  s.n = n;
  s.z_dim = 1;
  s.z_support = zs;
  s.gamma0 = gamma0;
  s.beta0 = {1.0};
  s.fe = {1.0, 0.0};
  s.covariate = CovariateSpec::jaccard();
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("primitive draws") {
  SUBCASE("degenerate fixed effects") {
    DgpSpec s = full_spec(20, 5, 1.0, 3);
    s.fe = {0.0, 0.0};
    Rng rng(1);
    AgentData ag;
    ShockMatrix eps;
    draw_primitives(s, rng, ag, eps);
    for (double a : ag.a) CHECK(a == 0.0);
    ag.validate();
  }
  SUBCASE("rho=1 sigma=0 ties A to Z1") {
    DgpSpec s = full_spec(20, 5, 1.0, 3);
    s.fe = {0.0, 1.0};
    Rng rng(1);
    AgentData ag;
    ShockMatrix eps;
    draw_primitives(s, rng, ag, eps);
    for (int i = 0; i < 20; ++i) CHECK(ag.a[i] == ag.zv(i, 0));
  }
  SUBCASE("same seed, same primitives") {
    const DgpSpec s = full_spec(15, 7, 2.0, 8);
    Rng r1(99), r2(99);
    AgentData a1, a2;
    ShockMatrix e1, e2;
    draw_primitives(s, r1, a1, e1);
    draw_primitives(s, r2, a2, e2);
    CHECK(a1.z == a2.z);
    CHECK(a1.a == a2.a);
    CHECK(e1.eps == e2.eps);
  }
  SUBCASE("support membership") {
    const DgpSpec s = full_spec(40, 21, 4.0, 5);
    Rng rng(4);
    AgentData ag;
    ShockMatrix eps;
    draw_primitives(s, rng, ag, eps);
    CHECK(ag.z_support.size() == 21);
    ag.validate();  // raises if any z falls off the grid
  }
}

TEST_CASE("gamma=0 equilibrium is the one-shot threshold graph") {
  DgpSpec s = full_spec(25, 9, 0.0, 6);
  Rng rng(12);
  AgentData ag;
  ShockMatrix eps;
  draw_primitives(s, rng, ag, eps);
  const SimDraw d = solve_equilibrium(ag, eps, s.theta0(), s);
  CHECK(d.converged);
  CHECK(d.sweeps <= 2);
  const DyadCovariates dy = build_dyad_z(ag, DyadKind::AbsDiff);
  for (int i = 0; i < 25; ++i)
    for (int j = i + 1; j < 25; ++j) {
      const bool want =
          dy.z_index(i, j, {1.0}) + ag.a[i] + ag.a[j] + eps(i, j) >= 0.0;
      CHECK(d.network.link(i, j) == want);
    }
}

TEST_CASE("all-negative shocks give the empty network") {
  DgpSpec s = full_spec(12, 5, 4.0, 6);
  Rng rng(12);
  AgentData ag;
  ShockMatrix eps;
  draw_primitives(s, rng, ag, eps);
  for (double& e : eps.eps) e = -1e6;
  const SimDraw d = solve_equilibrium(ag, eps, s.theta0(), s);
  CHECK(d.converged);
  CHECK(d.network.edge_count() == 0);
  CHECK(verify_pairwise_stability(d, s.theta0(), s));
}

TEST_CASE("determinism of full draws") {
  const DgpSpec s = full_spec(30, 11, 3.0, 77);
  const SimDraw a = simulate(s, 5);
  const SimDraw b = simulate(s, 5);
  CHECK(a.network == b.network);
  CHECK(a.sweeps == b.sweeps);
  const SimDraw c = simulate(s, 6);
  CHECK(a.network.edge_count() != c.network.edge_count());
}

TEST_CASE("converged draws are pairwise stable") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    DgpSpec s = full_spec(30, 7, 3.0, 50 + seed);
    const SimDraw d = simulate(s, seed);
    REQUIRE(d.converged);
    CHECK(verify_pairwise_stability(d, s.theta0(), s));
  }
}

TEST_CASE("toggling a link of a converged draw breaks stability") {
  DgpSpec s = full_spec(30, 7, 4.0, 123);
  SimDraw d = simulate(s, 2);
  REQUIRE(d.converged);
  // flip the first present link
  bool flipped = false;
  for (int i = 0; i < 30 && !flipped; ++i)
    for (int j = i + 1; j < 30 && !flipped; ++j)
      if (d.network.link(i, j)) {
        d.network.set_link(i, j, false);
        flipped = true;
      }
  REQUIRE(flipped);
  CHECK_FALSE(verify_pairwise_stability(d, s.theta0(), s));
}

TEST_CASE("monotone complements: least equilibrium below full-start solve") {
  // common friends with gamma >= 0: the sweep from the empty network lands
  // weakly below the sweep from the complete network, linkwise
  DgpSpec s = full_spec(20, 5, 0.5, 31);
  s.covariate = CovariateSpec::common_friends(20);
  Rng rng(9);
  AgentData ag;
  ShockMatrix eps;
  draw_primitives(s, rng, ag, eps);
  const SimDraw lo = solve_equilibrium(ag, eps, s.theta0(), s);
  Network full(20);
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j) full.set_link(i, j, true);
  const SimDraw hi = solve_equilibrium(ag, eps, s.theta0(), s, full);
  REQUIRE(lo.converged);
  REQUIRE(hi.converged);
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j)
      if (lo.network.link(i, j)) CHECK(hi.network.link(i, j));
}

TEST_CASE("full model n=100 converges on default seeds") {
  DgpSpec s = full_spec(100, 21, 4.0, 1);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SimDraw d = simulate(s, seed);
    CHECK(d.converged);
    CHECK(d.sweeps < 40);
    CHECK(d.has_x);
  }
}

TEST_CASE("negate_fixed_effects flips the threshold convention") {
  DgpSpec s = full_spec(10, 3, 1.0, 2);
  Rng rng(5);
  AgentData ag;
  ShockMatrix eps;
  draw_primitives(s, rng, ag, eps);
  const AgentData neg = negate_fixed_effects(ag);
  for (int i = 0; i < 10; ++i) CHECK(neg.a[i] == -ag.a[i]);
}
