#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netform/cycles.hpp"
#include "netform/equilibrium.hpp"
#include "netform/tetrad_scan.hpp"

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

// pool tables with identical structure across draws
void merge_into(BoundTable& into, const BoundTable& from) {
  for (const auto& g : from.groups) {
    RetainedGroup* tg = nullptr;
    for (auto& existing : into.groups)
      if (existing.key == g.key) tg = &existing;
    if (!tg) {
      into.groups.push_back({g.key, {}});
      tg = &into.groups.back();
    }
    for (const auto& c : g.cells) {
      ProfileCell* tc = nullptr;
      for (auto& existing : tg->cells)
        if (existing.key == c.key) tc = &existing;
      if (!tc) {
        tg->cells.push_back({c.key, 0, {}, {}});
        tc = &tg->cells.back();
      }
      tc->count += c.count;
      tc->pat.insert(tc->pat.end(), c.pat.begin(), c.pat.end());
      tc->flip.insert(tc->flip.end(), c.flip.begin(), c.flip.end());
    }
  }
}

}  // namespace

TEST_CASE("tetrad indicator terms") {
  DgpSpec s = full_spec(10, 3, 1.0, 4);
  SimDraw d = simulate(s, 1);
  // force a known pattern on agents 0..3
  d.network.set_link(0, 1, true);
  d.network.set_link(2, 3, true);
  d.network.set_link(0, 3, false);
  d.network.set_link(1, 2, false);
  const auto t = tetrad_indicator_terms(d, 0, 1, 2, 3, d.theta);
  CHECK(t.tetrad_pattern);
  CHECK_FALSE(t.flipped);

  d.network.set_link(0, 3, true);
  d.network.set_link(1, 2, true);
  const auto t2 = tetrad_indicator_terms(d, 0, 1, 2, 3, d.theta);
  CHECK_FALSE(t2.tetrad_pattern);
  CHECK_FALSE(t2.flipped);

  CHECK_THROWS(tetrad_indicator_terms(d, 0, 1, 2, 2, d.theta));
}

TEST_CASE("index contrast cancels for symmetric dyads") {
  // equal z and x across the four dyads: delta contrast is zero
  DgpSpec s = full_spec(6, 3, 0.0, 4);
  SimDraw d = simulate(s, 1);
  for (double& z : d.dyads.z) z = 2.5;
  d.has_x = false;
  const auto t = tetrad_indicator_terms(d, 0, 1, 2, 3, {{1.0}, {}});
  CHECK(t.delta_contrast == 0.0);
}

TEST_CASE("pointwise bound validity with stored shocks") {
  // the algebraic heart: pattern => shock contrast < delta contrast at the
  // truth, flipped => the reverse, for every pairing of every quadruplet
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const DgpSpec s = full_spec(25, 5, 4.0, 40 + seed);
    const SimDraw d = simulate(s, seed);
    REQUIRE(d.converged);
    const Theta truth = s.theta0();
    int patterns = 0;
    for (int a = 0; a < 25; ++a)
      for (int b = a + 1; b < 25; ++b)
        for (int c = b + 1; c < 25; ++c)
          for (int e = c + 1; e < 25; ++e) {
            const int roles[3][4] = {
                {a, b, c, e}, {a, b, e, c}, {a, c, b, e}};
            for (const auto& r : roles) {
              const auto t =
                  tetrad_indicator_terms(d, r[0], r[1], r[2], r[3], truth);
              const double sc =
                  tetrad_shock_contrast(d.shocks, r[0], r[1], r[2], r[3]);
              if (t.tetrad_pattern) {
                ++patterns;
                CHECK(sc < t.delta_contrast);
              }
              if (t.flipped) CHECK(sc > t.delta_contrast);
            }
          }
    CHECK(patterns > 0);
  }
}

TEST_CASE("scan produces consistent cell totals") {
  const DgpSpec s = full_spec(20, 3, 2.0, 9);
  const SimDraw d = simulate(s, 3);
  const BoundTable table = scan_tetrads(d, s.beta0);
  REQUIRE(table.groups.size() == 1);
  std::uint64_t total = 0;
  for (const auto& c : table.groups[0].cells) total += c.count;
  // 6 oriented tetrads per quadruplet
  CHECK(total == 6 * 4845ull);  // C(20,4) = 4845

  // flipped record count equals pattern record count globally (each pattern
  // is some orientation's flip)
  std::size_t pats = 0, flips = 0;
  for (const auto& c : table.groups[0].cells) {
    pats += c.pat.size();
    flips += c.flip.size();
  }
  CHECK(pats == flips);
}

TEST_CASE("bounds at extreme c") {
  const DgpSpec s = full_spec(16, 3, 2.0, 10);
  const SimDraw d = simulate(s, 5);
  const BoundTable table = scan_tetrads(d, s.beta0);
  const auto lo = evaluate_bounds(table, s.gamma0, -1e9, 1);
  for (const auto& cb : lo) {
    CHECK(cb.p_lower == 0.0);  // indicator never fires below all contrasts
  }
  const auto hi = evaluate_bounds(table, s.gamma0, 1e9, 1);
  for (const auto& cb : hi) {
    CHECK(cb.p_upper == 1.0);  // flipped indicator requires contrast > c
  }
}

TEST_CASE("criterion on synthetic tables") {
  SUBCASE("single cell with compatible bounds stays in the set") {
    BoundTable t;
    t.config_name = "tetrad";
    t.groups.resize(1);
    ProfileCell cell;
    cell.key = {0.0};
    cell.count = 100;
    for (int m = 0; m < 10; ++m) cell.pat.push_back({-1.0, 0.0});
    for (int m = 0; m < 10; ++m) cell.flip.push_back({1.0, 0.0});
    t.groups[0].cells.push_back(cell);
    CriterionOptions opt;
    opt.cell_min = 1;
    const auto r = criterion_nonparametric(t, 0.0, opt);
    CHECK(r.q <= 0.0);
    CHECK(r.in_identified_set);
  }
  SUBCASE("two cells with crossing bounds are rejected") {
    // cell A: p_L jumps to 0.7 at c = 0; cell B: p_U keeps 0.6 beyond c = 0
    BoundTable t;
    t.config_name = "tetrad";
    t.groups.resize(1);
    ProfileCell a, b;
    a.key = {0.0};
    a.count = 10;
    for (int m = 0; m < 7; ++m) a.pat.push_back({0.0, 0.0});
    b.key = {1.0};
    b.count = 10;
    for (int m = 0; m < 4; ++m) b.flip.push_back({5.0, 0.0});
    t.groups[0].cells.push_back(a);
    t.groups[0].cells.push_back(b);
    CriterionOptions opt;
    opt.cell_min = 1;
    const auto r = criterion_nonparametric(t, 0.0, opt);
    CHECK(r.q == doctest::Approx(0.1));
    CHECK_FALSE(r.in_identified_set);
  }
  SUBCASE("vacuous bounds give a strictly negative parametric criterion") {
    BoundTable t;
    t.config_name = "tetrad";
    t.groups.resize(1);
    ProfileCell cell;
    cell.key = {0.0};
    cell.count = 50;  // no pattern or flip observations at all
    t.groups[0].cells.push_back(cell);
    CriterionOptions opt;
    opt.cell_min = 1;
    const DeltaDistribution fd = DeltaDistribution::numerical_convolution();
    const auto r = criterion_parametric(t, 0.0, fd, opt);
    CHECK(r.q < 0.0);
    CHECK(r.q == doctest::Approx(-0.01).epsilon(0.2));
  }
}

TEST_CASE("sample bounds cover the truth across pooled draws") {
  // p_L <= F <= p_U at the true parameter, up to 3 standard errors on the
  // binding cell (pooled over draws to cut noise)
  const DeltaDistribution fd = DeltaDistribution::numerical_convolution();
  BoundTable pooled;
  pooled.config_name = "tetrad";
  const DgpSpec s = full_spec(30, 3, 4.0, 77);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const SimDraw d = simulate(s, seed);
    if (!d.converged) continue;
    merge_into(pooled, scan_tetrads(d, s.beta0));
  }
  int checked = 0;
  for (double c : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) {
    for (const auto& cb : evaluate_bounds(pooled, s.gamma0, c, 200)) {
      const double se =
          std::sqrt(0.25 / static_cast<double>(cb.count));
      CHECK(cb.p_lower <= fd.cdf(c) + 3 * se);
      CHECK(cb.p_upper >= fd.cdf(c) - 3 * se);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("specialization: generic engine reproduces the tetrad scan bit for bit") {
  const DgpSpec s = full_spec(18, 3, 3.0, 21);
  const SimDraw d = simulate(s, 2);
  const BoundTable fast = scan_tetrads(d, s.beta0);
  const auto generic = general_cycle_bounds(d, tetrad_config(0, 1, 2, 3),
                                            "tetrad", s.beta0, s.gamma0,
                                            0.5, 1);
  CHECK_FALSE(generic.no_differencing_warning);
  REQUIRE(generic.table.groups.size() == 1);
  REQUIRE(fast.groups.size() == 1);
  REQUIRE(generic.table.groups[0].cells.size() == fast.groups[0].cells.size());

  // align cells by key and compare counts, records, and bound values exactly
  for (const auto& fc : fast.groups[0].cells) {
    const ProfileCell* gc = nullptr;
    for (const auto& cand : generic.table.groups[0].cells)
      if (cand.key == fc.key) gc = &cand;
    REQUIRE(gc != nullptr);
    CHECK(gc->count == fc.count);
    REQUIRE(gc->pat.size() == fc.pat.size());
    REQUIRE(gc->flip.size() == fc.flip.size());
    auto sorted = [](std::vector<BoundRecord> v) {
      std::sort(v.begin(), v.end(), [](const BoundRecord& x, const BoundRecord& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
      });
      return v;
    };
    const auto fp = sorted(fc.pat), gp = sorted(gc->pat);
    for (std::size_t m = 0; m < fp.size(); ++m) {
      CHECK(fp[m].a == gp[m].a);  // bitwise: same fold order by construction
      CHECK(fp[m].b == gp[m].b);
    }
    const auto ff = sorted(fc.flip), gf = sorted(gc->flip);
    for (std::size_t m = 0; m < ff.size(); ++m) {
      CHECK(ff[m].a == gf[m].a);
      CHECK(ff[m].b == gf[m].b);
    }
  }
  // and the evaluated p_L / p_U tables agree exactly at several (gamma, c)
  for (double g : {-2.0, 0.0, 3.0, 7.5})
    for (double c : {-4.0, 0.0, 2.0}) {
      const auto bf = evaluate_bounds(fast, g, c, 1);
      const auto bg = evaluate_bounds(generic.table, g, c, 1);
      REQUIRE(bf.size() == bg.size());
      for (std::size_t i = 0; i < bf.size(); ++i) {
        const CellBounds* match = nullptr;
        for (const auto& cand : bg)
          if (cand.cell_key == bf[i].cell_key) match = &cand;
        REQUIRE(match != nullptr);
        CHECK(match->p_lower == bf[i].p_lower);
        CHECK(match->p_upper == bf[i].p_upper);
      }
    }
}

TEST_CASE("criterion identified set sanity on simulated data") {
  const DeltaDistribution fd = DeltaDistribution::numerical_convolution();
  const DgpSpec s = full_spec(60, 5, 4.0, 31);
  const SimDraw d = simulate(s, 1);
  REQUIRE(d.converged);
  const BoundTable table = scan_tetrads(d, s.beta0);
  CriterionOptions opt;
  const auto at_truth = criterion_parametric(table, s.gamma0, fd, opt);
  INFO("q at truth: ", at_truth.q);
  CHECK(at_truth.q <= 0.05);  // small-sample slack
  // far-off gamma gets rejected
  const auto far = criterion_parametric(table, 35.0, fd, opt);
  CHECK(far.q > 0.0);
}
