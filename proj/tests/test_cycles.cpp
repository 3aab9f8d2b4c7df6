#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netform/cycles.hpp"

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

const BoundTable* find_table(const std::vector<BoundTable>& ts,
                             const char* name) {
  for (const auto& t : ts)
    if (t.config_name == name) return &t;
  return nullptr;
}

}  // namespace

TEST_CASE("per-class scanners agree with the generic engine") {
  const DgpSpec s = full_spec(14, 3, 2.0, 5);
  const SimDraw d = simulate(s, 4);

  struct Case {
    ConfigClass cls;
    WeightedLinkConfig tpl;
  };
  const std::vector<Case> cases{
      {ConfigClass::ThreeLinkTriad, three_link_triad_config(0, 1, 2)},
      {ConfigClass::TwoLinkTriad, two_link_triad_config(0, 1, 2)},
      {ConfigClass::WeightedStar, weighted_star_config(0, 1, 2, 3)},
  };
  for (const auto& c : cases) {
    const BoundTable fast = scan_config(d, c.cls, s.beta0);
    const auto gen = general_cycle_bounds(d, c.tpl, config_name(c.cls),
                                          s.beta0, s.gamma0, 0.0, 1);
    INFO("class ", config_name(c.cls));
    REQUIRE(gen.table.groups.size() == fast.groups.size());
    std::uint64_t fast_total = 0, gen_total = 0;
    for (const auto& g : fast.groups)
      for (const auto& cell : g.cells) fast_total += cell.count;
    for (const auto& g : gen.table.groups)
      for (const auto& cell : g.cells) gen_total += cell.count;
    CHECK(fast_total == gen_total);

    for (const auto& fg : fast.groups) {
      const RetainedGroup* gg = nullptr;
      for (const auto& cand : gen.table.groups)
        if (cand.key == fg.key) gg = &cand;
      REQUIRE(gg != nullptr);
      REQUIRE(gg->cells.size() == fg.cells.size());
      for (const auto& fc : fg.cells) {
        const ProfileCell* gc = nullptr;
        for (const auto& cand : gg->cells)
          if (cand.key == fc.key) gc = &cand;
        REQUIRE(gc != nullptr);
        CHECK(gc->count == fc.count);
        CHECK(gc->pat.size() == fc.pat.size());
        CHECK(gc->flip.size() == fc.flip.size());
      }
    }
    // bound values match exactly on the shared cells
    for (double g : {-1.0, 0.5, 3.0}) {
      const auto bf = evaluate_bounds(fast, g, 0.7, 1);
      const auto bg = evaluate_bounds(gen.table, g, 0.7, 1);
      REQUIRE(bf.size() == bg.size());
      for (const auto& fb : bf) {
        const CellBounds* match = nullptr;
        for (const auto& cand : bg)
          if (cand.cell_key == fb.cell_key && cand.group_key == fb.group_key)
            match = &cand;
        REQUIRE(match != nullptr);
        CHECK(match->p_lower == fb.p_lower);
        CHECK(match->p_upper == fb.p_upper);
      }
    }
  }
}

TEST_CASE("retained keys follow the differencing split") {
  const DgpSpec s = full_spec(12, 3, 1.0, 6);
  const SimDraw d = simulate(s, 2);
  // three-link triad retains only the center: group keys are single values
  const BoundTable t3 = scan_config(d, ConfigClass::ThreeLinkTriad, s.beta0);
  for (const auto& g : t3.groups) CHECK(g.key.size() == 1);
  // two-link triad retains both endpoints
  const BoundTable t2 = scan_config(d, ConfigClass::TwoLinkTriad, s.beta0);
  for (const auto& g : t2.groups) CHECK(g.key.size() == 2);
  // star retains the three leaves
  const BoundTable ts = scan_config(d, ConfigClass::WeightedStar, s.beta0);
  for (const auto& g : ts.groups) CHECK(g.key.size() == 3);
  // hexad differences everything out
  CycleScanOptions opt;
  opt.hexad_samples = 20'000;
  const BoundTable th = scan_config(d, ConfigClass::Hexad, s.beta0, opt);
  REQUIRE(th.groups.size() == 1);
  CHECK(th.groups[0].key.empty());
  for (const auto& c : th.groups[0].cells) CHECK(c.key.size() == 6);
}

TEST_CASE("never-occurring patterns leave vacuous bounds") {
  // empty network: no three-link pattern can fire, flip fires at every triple
  DgpSpec s = full_spec(10, 3, 1.0, 7);
  SimDraw d = simulate(s, 3);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) d.network.set_link(i, j, false);
  const BoundTable t = scan_config(d, ConfigClass::ThreeLinkTriad, s.beta0);
  for (const auto& g : t.groups)
    for (const auto& c : g.cells) {
      CHECK(c.pat.empty());
      const auto bounds = evaluate_bounds(t, 0.0, 1e9, 1);
      for (const auto& b : bounds) CHECK(b.p_lower == 0.0);
    }
}

TEST_CASE("cycle bounds cover the truth at moderate sample sizes") {
  const DgpSpec s = full_spec(40, 3, 4.0, 13);
  std::vector<BoundTable> pooled;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SimDraw d = simulate(s, seed);
    if (!d.converged) continue;
    CycleScanOptions opt;
    opt.hexad_samples = 200'000;
    opt.hexad_seed = seed;
    auto tabs = scan_class_set(
        d,
        {ConfigClass::ThreeLinkTriad, ConfigClass::TwoLinkTriad,
         ConfigClass::WeightedStar, ConfigClass::Hexad},
        s.beta0, opt);
    for (auto& t : tabs) {
      // lower <= upper + 3se cellwise at the truth for a c sweep
      for (double c : {-4.0, 0.0, 4.0})
        for (const auto& cb : evaluate_bounds(t, s.gamma0, c, 30)) {
          const double se = std::sqrt(0.25 / static_cast<double>(cb.count));
          INFO(t.config_name, " cell count ", cb.count);
          CHECK(cb.p_lower <= cb.p_upper + 3 * se);
        }
    }
    pooled = std::move(tabs);
  }
  CHECK(!pooled.empty());
}

TEST_CASE("no-differencing template only warns") {
  const DgpSpec s = full_spec(8, 3, 1.0, 3);
  const SimDraw d = simulate(s, 1);
  WeightedLinkConfig single;
  single.agents = {0, 1};
  single.links = {{0, 1}};
  single.weights = {1.0};
  const auto r =
      general_cycle_bounds(d, single, "single_link", s.beta0, 0.0, 0.0, 1);
  CHECK(r.no_differencing_warning);
  CHECK(!r.bounds.empty());
}

TEST_CASE("aggregation over configuration classes") {
  const DgpSpec s = full_spec(40, 3, 4.0, 17);
  const SimDraw d = simulate(s, 1);
  REQUIRE(d.converged);
  CycleScanOptions opt;
  opt.hexad_samples = 100'000;

  const auto tetrad_only = scan_class_set(d, {ConfigClass::Tetrad}, s.beta0, opt);
  const auto all = scan_class_set(
      d,
      {ConfigClass::Tetrad, ConfigClass::ThreeLinkTriad,
       ConfigClass::TwoLinkTriad, ConfigClass::WeightedStar, ConfigClass::Hexad},
      s.beta0, opt);

  CriterionOptions copt;
  int in_tetrad = 0, in_all = 0;
  for (double g = -10.0; g <= 25.0; g += 1.0) {
    const auto qt = aggregate_criterion(tetrad_only, g, copt);
    // singleton class equals the plain nonparametric tetrad criterion
    const auto direct = criterion_nonparametric(tetrad_only[0], g, copt);
    CHECK(qt.q == direct.q);
    const auto qa = aggregate_criterion(all, g, copt);
    CHECK(qa.q >= qt.q);  // more restrictions never enlarge the set
    in_tetrad += qt.in_identified_set;
    in_all += qa.in_identified_set;
  }
  CHECK(in_all <= in_tetrad);
}
