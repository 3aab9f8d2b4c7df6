#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "netform/core.hpp"

using namespace netform;

TEST_CASE("delta_index evaluates the linear index") {
  CHECK(delta_index({2}, {0.5}, {{1}, {4}}) == 4.0);
  CHECK(delta_index({0, 0}, {0}, {{3, -2}, {0}}) == 0.0);
  CHECK(delta_index({1, 2}, {}, {{1, 1}, {}}) == 3.0);
  CHECK_THROWS(delta_index({1, 2}, {}, {{1}, {}}));
}

TEST_CASE("incidence sums for the canned configurations") {
  SUBCASE("tetrad 4-cycle differencing is complete") {
    const auto sums = incidence_sums(tetrad_config(0, 1, 2, 3));
    for (auto& [agent, s] : sums) CHECK(s == 0.0);
    const auto split = retained_and_differenced(tetrad_config(0, 1, 2, 3));
    CHECK(split.retained.empty());
    CHECK(split.differenced.size() == 4);
  }
  SUBCASE("three-link triad keeps the center") {
    const auto cfg = three_link_triad_config(5, 6, 7);
    for (auto& [agent, s] : incidence_sums(cfg)) {
      if (agent == 5) CHECK(s == 2.0);
      else CHECK(s == 0.0);
    }
    const auto split = retained_and_differenced(cfg);
    REQUIRE(split.retained.size() == 1);
    CHECK(split.retained[0] == 5);
  }
  SUBCASE("weighted star zeroes the hub") {
    const auto cfg = weighted_star_config(0, 1, 2, 3);
    for (auto& [agent, s] : incidence_sums(cfg)) {
      if (agent == 0) CHECK(s == 0.0);
      if (agent == 1 || agent == 2) CHECK(s == 1.0);
      if (agent == 3) CHECK(s == -2.0);
    }
  }
  SUBCASE("alternating hexad differencing is complete") {
    const auto cfg = hexad_config({0, 1, 2, 3, 4, 5});
    const auto split = retained_and_differenced(cfg);
    CHECK(split.retained.empty());
  }
  SUBCASE("two-link triad differencing keeps the endpoints") {
    const auto split = retained_and_differenced(two_link_triad_config(0, 1, 2));
    CHECK(split.differenced == std::vector<int>{0});
    CHECK(split.retained == std::vector<int>{1, 2});
  }
}

TEST_CASE("fixed effects cancel exactly on complete-elimination configs") {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a(8);
    for (double& v : a) v = rng.uniform(-100, 100);
    for (const auto& cfg :
         {tetrad_config(0, 1, 2, 3), hexad_config({2, 4, 0, 7, 5, 1})}) {
      // grouped per agent the weights vanish exactly (integer arithmetic)
      double grouped = 0.0;
      for (auto& [agent, sigma] : incidence_sums(cfg)) {
        CHECK(sigma == 0.0);
        grouped += sigma * a[agent];
      }
      CHECK(grouped == 0.0);
      // the raw edge fold cancels to rounding noise
      double s = 0.0;
      for (std::size_t e = 0; e < cfg.links.size(); ++e)
        s += cfg.weights[e] * (a[cfg.links[e].first] + a[cfg.links[e].second]);
      CHECK(std::abs(s) < 1e-12);
    }
  }
}

TEST_CASE("tetrad weighted latent sum reduces to the shock contrast") {
  Rng rng(11);
  const auto cfg = tetrad_config(0, 1, 2, 3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(4), eps(6);
    for (double& v : a) v = rng.uniform(-10, 10);
    for (double& v : eps) v = rng.uniform(-10, 10);
    double sv = 0.0, se = 0.0;
    for (std::size_t e = 0; e < cfg.links.size(); ++e) {
      const auto [i, j] = cfg.links[e];
      const double epse = eps[pair_index(4, i, j)];
      sv += cfg.weights[e] * (a[i] + a[j] + epse);
      se += cfg.weights[e] * epse;
    }
    CHECK(sv == doctest::Approx(se).epsilon(1e-14));
  }
}

TEST_CASE("incidence sums invariant to link order and relabeling") {
  WeightedLinkConfig cfg = three_link_triad_config(0, 1, 2);
  WeightedLinkConfig shuffled = cfg;
  std::swap(shuffled.links[0], shuffled.links[2]);
  std::swap(shuffled.weights[0], shuffled.weights[2]);
  auto a = incidence_sums(cfg);
  auto b = incidence_sums(shuffled);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);

  // relabel 0->10, 1->11, 2->12
  const auto relabeled = three_link_triad_config(10, 11, 12);
  for (std::size_t m = 0; m < a.size(); ++m)
    CHECK(incidence_sums(relabeled)[m].second == a[m].second);
}

TEST_CASE("config validation") {
  WeightedLinkConfig bad;
  bad.agents = {0, 1};
  bad.links = {{0, 1}};
  bad.weights = {0.0};
  CHECK_THROWS(bad.validate());
  bad.weights = {1.0};
  CHECK_NOTHROW(bad.validate());
  bad.links = {{1, 0}};
  CHECK_THROWS(bad.validate());  // not canonical (min,max)
}

TEST_CASE("network storage is symmetric with zero diagonal") {
  Network net(70);
  net.set_link(3, 65, true);
  CHECK(net.link(3, 65));
  CHECK(net.link(65, 3));
  CHECK_FALSE(net.link(3, 3));
  CHECK(net.degree(3) == 1);
  CHECK(net.edge_count() == 1);
  CHECK_THROWS(net.set_link(4, 4, true));
  net.set_link(3, 65, false);
  CHECK(net.edge_count() == 0);
}

TEST_CASE("rng streams are deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());
  Rng c(43);
  CHECK(a.uniform01() != c.uniform01());
  // logistic draws have median 0 (smoke)
  Rng d(5);
  int neg = 0;
  for (int i = 0; i < 10000; ++i) neg += d.logistic() < 0;
  CHECK(neg > 4700);
  CHECK(neg < 5300);
}
