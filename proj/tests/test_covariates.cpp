#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netform/covariates.hpp"
#include "netform/core.hpp"

using namespace netform;

namespace {

Network random_net(int n, double density, std::uint64_t seed) {
  Network net(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < density) net.set_link(i, j, true);
  return net;
}

}  // namespace

TEST_CASE("common friends counts shared neighbors") {
  Network tri(3);
  tri.set_link(0, 1, true);
  tri.set_link(0, 2, true);
  tri.set_link(1, 2, true);
  CHECK(common_friends(tri, 0, 1) == 1);

  Network empty(5);
  CHECK(common_friends(empty, 2, 4) == 0);

  Network star(4);  // center 0, leaves 1..3
  star.set_link(0, 1, true);
  star.set_link(0, 2, true);
  star.set_link(0, 3, true);
  CHECK(common_friends(star, 1, 2) == 1);
  CHECK_THROWS(common_friends(star, 1, 1));
}

TEST_CASE("jaccard index") {
  Network isolated(4);
  CHECK(jaccard(isolated, 0, 1) == 0.0);  // 0/0 convention

  Network shared(3);  // 0 and 1 each linked to exactly {2}
  shared.set_link(0, 2, true);
  shared.set_link(1, 2, true);
  CHECK(jaccard(shared, 0, 1) == 1.0);

  // N(0) = {2,3}, N(1) = {3,4}: intersection 1, union 3
  Network mix(5);
  mix.set_link(0, 2, true);
  mix.set_link(0, 3, true);
  mix.set_link(1, 3, true);
  mix.set_link(1, 4, true);
  CHECK(jaccard(mix, 0, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("compute_all fills a symmetric bounded table") {
  SUBCASE("empty network, jaccard") {
    Network net(6);
    DyadCovariates dy;
    dy.n = 6;
    compute_all(net, CovariateSpec::jaccard(), dy);
    for (double v : dy.x) CHECK(v == 0.0);
  }
  SUBCASE("complete graph on four agents") {
    Network k4(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) k4.set_link(i, j, true);
    DyadCovariates cf, jc;
    cf.n = jc.n = 4;
    compute_all(k4, CovariateSpec::common_friends(4), cf);
    for (double v : cf.x) CHECK(v == 2.0);
    // every pair: 2 common neighbors, union {all four}: 2/4
    compute_all(k4, CovariateSpec::jaccard(), jc);
    for (double v : jc.x) CHECK(v == doctest::Approx(0.5));
  }
  SUBCASE("custom covariate out of declared range raises") {
    Network net(4);
    net.set_link(0, 1, true);
    auto spec = CovariateSpec::custom_fn(
        [](const Network& nw, int, int) {
          return static_cast<double>(nw.edge_count());
        },
        0.0, 0.5);
    DyadCovariates dy;
    dy.n = 4;
    CHECK_THROWS(compute_all(net, spec, dy));
  }
}

TEST_CASE("local externality holds for neighborhood statistics") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const Network net = random_net(7, 0.4, seed);
    CHECK(check_local_externality(CovariateSpec::common_friends(7), net));
    CHECK(check_local_externality(CovariateSpec::jaccard(), net));
  }
  // total edge count depends on remote links
  const Network net = random_net(6, 0.5, 9);
  auto spec = CovariateSpec::custom_fn(
      [](const Network& nw, int, int) {
        return static_cast<double>(nw.edge_count());
      },
      0.0, 1e9);
  CHECK_FALSE(check_local_externality(spec, net));
}

TEST_CASE("comparison-pattern invariance on admissible tetrads") {
  int admissible_seen = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Network net = random_net(8, 0.35, seed);
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        for (int c = b + 1; c < 8; ++c)
          for (int d = c + 1; d < 8; ++d) {
            // one role tuple per diagonal partition
            const int roles[3][4] = {
                {a, b, c, d}, {a, b, d, c}, {a, c, b, d}};
            for (const auto& r : roles) {
              if (net.link(r[0], r[2]) || net.link(r[1], r[3])) continue;
              ++admissible_seen;
              CHECK(check_cpi(CovariateSpec::common_friends(8), net, r[0],
                              r[1], r[2], r[3]));
              CHECK(check_cpi(CovariateSpec::jaccard(), net, r[0], r[1], r[2],
                              r[3]));
            }
          }
  }
  CHECK(admissible_seen > 50);

  // a covariate that reads a tetrad link itself breaks the invariance
  Network net(6);
  net.set_link(4, 5, true);
  auto spec = CovariateSpec::custom_fn(
      [](const Network& nw, int, int) {
        return nw.link(0, 3) ? 1.0 : 0.0;  // the ik tetrad link itself
      },
      0.0, 1.0);
  CHECK_FALSE(check_cpi(spec, net, 0, 1, 2, 3));
}

TEST_CASE("cpi external-quantity formulas by brute force") {
  // common friends restricted to the comparison patterns equals the count of
  // shared external neighbors; jaccard equals cbar / (dbar_i + dbar_j + 2 - cbar)
  for (std::uint64_t seed = 11; seed <= 14; ++seed) {
    Network net = random_net(8, 0.4, seed);
    const int i = 0, j = 1, h = 2, k = 3;
    if (net.link(i, h)) net.set_link(i, h, false);
    if (net.link(j, k)) net.set_link(j, k, false);
    // impose the tetrad pattern
    net.set_link(i, j, true);
    net.set_link(h, k, true);
    net.set_link(i, k, false);
    net.set_link(j, h, false);

    auto external_cf = [&](int u, int v) {
      int c = 0;
      for (int l = 4; l < 8; ++l)
        c += net.link(u, l) && net.link(v, l);
      return c;
    };
    auto external_deg = [&](int u, const std::array<int, 3>& excl) {
      int d = 0;
      for (int l = 0; l < 8; ++l) {
        if (l == u || l == excl[0] || l == excl[1] || l == excl[2]) continue;
        d += net.link(u, l);
      }
      return d;
    };
    CHECK(common_friends(net, i, j) == external_cf(i, j));
    const double cb = external_cf(i, j);
    const double di = external_deg(i, {j, h, k});
    const double dj = external_deg(j, {i, h, k});
    if (di + dj + 2 - cb > 0)
      CHECK(jaccard(net, i, j) == doctest::Approx(cb / (di + dj + 2 - cb)));
  }
}

TEST_CASE("x table symmetry") {
  const Network net = random_net(9, 0.5, 21);
  DyadCovariates dy;
  dy.n = 9;
  compute_all(net, CovariateSpec::jaccard(), dy);
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      CHECK(dy.x_at(i, j)[0] == dy.x_at(j, i)[0]);
}
