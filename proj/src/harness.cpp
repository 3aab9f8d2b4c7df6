#include "netform/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "netform/io.hpp"
#include "netform/kernels.hpp"
#include "netform/strategic.hpp"

namespace netform {

namespace {

using nlohmann::json;

void parallel_for(int jobs, std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const int workers = std::min<std::size_t>(jobs, count);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  for (auto& t : pool) t.join();
}

ClosedFormSpec closed_spec(const ExperimentConfig& cfg) {
  ClosedFormSpec s;
  s.gamma0 = cfg.gamma0;
  s.fe = cfg.mode == RunMode::FeOnlyMc;
  s.sigma_a = cfg.sigma_a;
  s.rho = cfg.rho;
  s.mc_draws = cfg.mc_draws_fe;
  s.mc_seed = cfg.seed;
  s.crit.cell_min = cfg.cell_min;
  return s;
}

SeedResult run_closed_form(const ExperimentConfig& cfg,
                           const DeltaDistribution& fdelta, int jobs) {
  const ClosedFormSpec spec = closed_spec(cfg);
  const std::vector<double> grid = cfg.gamma_grid();
  SeedResult r;
  r.seed = cfg.seed;
  r.grid_param.resize(grid.size());
  parallel_for(jobs, grid.size(), [&](std::size_t i) {
    const double q = closed_form_q(spec, grid[i], fdelta);
    r.grid_param[i] = {grid[i], q, q <= 0.0};
  });
  r.set_param = summarize_grid(r.grid_param);
  return r;
}

SeedResult run_full_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                         const DeltaDistribution& fdelta) {
  DgpSpec dgp = cfg.dgp();
  const SimDraw draw = simulate(dgp, seed);

  CycleScanOptions copt;
  copt.hexad_samples = cfg.hexad_samples;
  copt.hexad_seed = derive_seed(cfg.seed, seed);
  const std::vector<BoundTable> tables =
      scan_class_set(draw, cfg.restrictions, cfg.beta0, copt);

  const BoundTable* tetrad_table = nullptr;
  for (const auto& t : tables)
    if (t.config_name == "tetrad") tetrad_table = &t;

  std::size_t active = 0, total_cells = 0;
  for (const auto& t : tables) {
    active += t.active_cells(cfg.cell_min);
    for (const auto& g : t.groups) total_cells += g.cells.size();
  }
  if (active == 0)
    throw std::runtime_error("insufficient data: no cell meets cell_min");

  CriterionOptions opt;
  opt.cell_min = cfg.cell_min;

  SeedResult r;
  r.seed = seed;
  r.diag.seed = seed;
  r.diag.converged = draw.converged;
  r.diag.sweeps = draw.sweeps;
  r.diag.edges = draw.network.edge_count();
  r.diag.active_cells = active;
  r.diag.dropped_cells = total_cells - active;

  for (double g : cfg.gamma_grid()) {
    if (cfg.criterion != CriterionChoice::Parametric) {
      const AggregateResult a = aggregate_criterion(tables, g, opt);
      r.grid_nonparam.push_back({g, a.q, a.in_identified_set});
    }
    if (cfg.criterion != CriterionChoice::Nonparametric) {
      if (!tetrad_table)
        throw std::runtime_error("parametric criterion needs the tetrad class");
      const CriterionResult c =
          criterion_parametric(*tetrad_table, g, fdelta, opt);
      r.grid_param.push_back({g, c.q, c.in_identified_set});
    }
  }
  if (!r.grid_nonparam.empty()) r.set_nonparam = summarize_grid(r.grid_nonparam);
  if (!r.grid_param.empty()) r.set_param = summarize_grid(r.grid_param);
  return r;
}

PointIdResult run_point_id(const ExperimentConfig& cfg, std::uint64_t seed) {
  DgpSpec dgp = cfg.dgp();
  const SimDraw draw = simulate(dgp, seed);
  const RobustnessGraphs graphs = classify_links(
      draw.agents, draw.shocks, draw.theta, draw.dyads, dgp.covariate);
  const StrategicNeighborhoods nbhds = strategic_neighborhoods(graphs);

  SelectOptions sopt;
  sopt.require_isolation = cfg.require_isolation;
  const auto tetrads = select_admissible(draw, &nbhds, sopt);

  PointIdResult pr;
  pr.seed = seed;
  pr.admissible = tetrads.size();
  std::size_t isolated = 0;
  for (const auto& t : tetrads) {
    if (t.outcome != TetradOutcome::Neither) ++pr.classified;
    if (t.isolated) ++isolated;
  }
  pr.discarded = pr.admissible - pr.classified;
  pr.isolated_fraction =
      tetrads.empty() ? 0.0
                      : static_cast<double>(isolated) /
                            static_cast<double>(tetrads.size());
  pr.fit = fit_conditional_logit(tetrads);
  return pr;
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg,
                     const DeltaDistribution* fdelta) {
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<DeltaDistribution> local;
  if (!fdelta && cfg.mode != RunMode::PointId) {
    local = DeltaDistribution::numerical_convolution();
    fdelta = &*local;
  }

  ExperimentReport rep;
  rep.config = cfg;
  switch (cfg.mode) {
    case RunMode::BaselineClosedForm:
    case RunMode::FeOnlyMc:
      rep.seeds.push_back(run_closed_form(cfg, *fdelta, cfg.jobs));
      break;
    case RunMode::FullSimulated: {
      rep.seeds.resize(cfg.replications.size());
      parallel_for(cfg.jobs, cfg.replications.size(), [&](std::size_t i) {
        rep.seeds[i] = run_full_seed(cfg, cfg.replications[i], *fdelta);
      });
      break;
    }
    case RunMode::PointId:
      for (std::uint64_t s : cfg.replications)
        rep.point_fits.push_back(run_point_id(cfg, s));
      break;
  }
  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

std::string interval_str(const IdentifiedSet& s) {
  if (s.intervals.empty()) return "(empty)";
  std::ostringstream os;
  for (std::size_t i = 0; i < s.intervals.size(); ++i) {
    const auto& iv = s.intervals[i];
    if (i) os << " u ";
    os << (iv.open_lo ? "(-inf*" : "[") << (iv.open_lo ? "" : format_double(iv.lo));
    os << ", ";
    os << (iv.open_hi ? "inf*)" : format_double(iv.hi) + "]");
  }
  return os.str();
}

std::string emit_plot_data(const std::vector<GridPoint>& grid) {
  if (grid.empty()) throw std::invalid_argument("emit_plot_data: no grid points");
  CsvWriter csv({"gamma", "q_value"});
  for (const auto& p : grid) csv.row_num({p.gamma, p.q});
  return csv.str();
}

void write_report(const ExperimentReport& report,
                  const std::filesystem::path& out_dir) {
  json meta;
  meta["mode"] = static_cast<int>(report.config.mode);
  meta["runtime_seconds"] = report.runtime_seconds;
  meta["simd_backend"] = kernels::backend_name();
  meta["config"] = config_to_text(report.config);

  json seeds = json::array();
  for (const auto& s : report.seeds) {
    CsvWriter csv({"gamma", "q_nonparam", "in_nonparam", "q_param", "in_param"});
    const std::size_t npts =
        std::max(s.grid_nonparam.size(), s.grid_param.size());
    for (std::size_t i = 0; i < npts; ++i) {
      std::vector<std::string> row(5, "");
      if (i < s.grid_nonparam.size()) {
        row[0] = format_double(s.grid_nonparam[i].gamma);
        row[1] = format_double(s.grid_nonparam[i].q);
        row[2] = s.grid_nonparam[i].in_set ? "1" : "0";
      }
      if (i < s.grid_param.size()) {
        row[0] = format_double(s.grid_param[i].gamma);
        row[3] = format_double(s.grid_param[i].q);
        row[4] = s.grid_param[i].in_set ? "1" : "0";
      }
      csv.row(row);
    }
    csv.save(out_dir / ("criterion_seed" + std::to_string(s.seed) + ".csv"));

    json js;
    js["seed"] = s.seed;
    js["set_nonparam"] = interval_str(s.set_nonparam);
    js["set_param"] = interval_str(s.set_param);
    js["converged"] = s.diag.converged;
    js["sweeps"] = s.diag.sweeps;
    js["edges"] = s.diag.edges;
    js["active_cells"] = s.diag.active_cells;
    js["dropped_cells"] = s.diag.dropped_cells;
    seeds.push_back(js);
  }
  meta["seeds"] = seeds;

  json fits = json::array();
  for (const auto& f : report.point_fits) {
    json jf;
    jf["seed"] = f.seed;
    jf["theta_hat"] = f.fit.theta;
    jf["std_err"] = f.fit.std_err;
    jf["loglik"] = f.fit.loglik;
    jf["converged"] = f.fit.converged;
    jf["n_obs"] = f.fit.n_obs;
    jf["admissible"] = f.admissible;
    jf["classified"] = f.classified;
    jf["discarded"] = f.discarded;
    jf["isolated_fraction"] = f.isolated_fraction;
    fits.push_back(jf);
  }
  meta["point_fits"] = fits;

  write_file_atomic(out_dir / "report.json", meta.dump(2) + "\n");
}

namespace {

bool intervals_match(const IdentifiedSet& got, double want_lo, double want_hi,
                     bool want_inf_hi, double grid_step, double grid_max) {
  if (got.intervals.size() != 1) return false;
  const auto& iv = got.intervals[0];
  if (std::abs(iv.lo - want_lo) > grid_step + 1e-9) return false;
  if (want_inf_hi) return iv.open_hi && iv.hi >= grid_max - 1e-9;
  if (iv.open_hi) return false;
  return std::abs(iv.hi - want_hi) <= grid_step + 1e-9;
}

}  // namespace

ReproduceOutcome reproduce_paper(const std::string& which,
                                 const std::filesystem::path& out_dir,
                                 int jobs) {
  ReproduceOutcome out;
  std::ostringstream os;
  const DeltaDistribution fdelta = DeltaDistribution::numerical_convolution();

  if (which == "figure1") {
    ExperimentConfig cfg;
    cfg.mode = RunMode::BaselineClosedForm;
    cfg.gamma0 = 1.0;
    cfg.gamma_min = -10.0;
    cfg.gamma_max = 10.0;
    cfg.gamma_step = 0.5;
    cfg.jobs = jobs;
    const ExperimentReport rep = run(cfg, &fdelta);
    write_report(rep, out_dir);
    write_file_atomic(out_dir / "figure1.csv",
                      emit_plot_data(rep.seeds[0].grid_param));
    const IdentifiedSet& set = rep.seeds[0].set_param;
    const bool pass = set.intervals.size() == 1 &&
                      set.intervals[0].lo == 1.0 && set.intervals[0].hi == 5.0;
    os << "figure1: identified set " << interval_str(set)
       << " (target [1, 5]) -> " << (pass ? "PASS" : "FAIL") << "\n";
    out.pass = pass;
  } else if (which == "table1") {
    struct Col {
      double sigma_a, rho, want_lo, want_hi;
      bool inf_hi;
    };
    const std::vector<Col> cols{{1.0, 0.0, 1.0, 7.0, false},
                                {5.0, 0.0, 0.0, 0.0, true},
                                {1.0, 0.1, 1.0, 6.0, false},
                                {1.0, 0.9, 1.0, 0.0, true}};
    bool all = true;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      ExperimentConfig cfg;
      cfg.mode = RunMode::FeOnlyMc;
      cfg.gamma0 = 1.0;
      cfg.sigma_a = cols[c].sigma_a;
      cfg.rho = cols[c].rho;
      cfg.gamma_min = -10.0;
      cfg.gamma_max = 10.0;
      cfg.gamma_step = 1.0;
      cfg.jobs = jobs;
      const ExperimentReport rep = run(cfg, &fdelta);
      write_report(rep, out_dir / ("table1_col" + std::to_string(c + 1)));
      const IdentifiedSet& set = rep.seeds[0].set_param;
      const bool pass =
          intervals_match(set, cols[c].want_lo, cols[c].want_hi,
                          cols[c].inf_hi, cfg.gamma_step, cfg.gamma_max);
      all = all && pass;
      os << "table1 col(" << c + 1 << "): identified set " << interval_str(set)
         << " (target " << (cols[c].inf_hi
                                ? "[" + format_double(cols[c].want_lo) + ", inf)"
                                : "[" + format_double(cols[c].want_lo) + ", " +
                                      format_double(cols[c].want_hi) + "]")
         << " within 1 grid point) -> " << (pass ? "PASS" : "FAIL") << "\n";
    }
    out.pass = all;
  } else if (which == "table2") {
    const std::vector<int> supports{3, 9, 15, 21};
    std::vector<double> strict_upper;
    bool contains_truth_at_21 = false;
    for (int zs : supports) {
      ExperimentConfig cfg;
      cfg.mode = RunMode::FullSimulated;
      cfg.n = 100;
      cfg.gamma0 = 4.0;
      cfg.beta0 = {1.0};
      cfg.z_support = zs;
      cfg.sigma_a = 1.0;
      cfg.rho = 0.0;
      cfg.covariate = CovariateKind::Jaccard;
      cfg.criterion = CriterionChoice::Both;
      cfg.gamma_min = -40.0;
      cfg.gamma_max = 40.0;
      cfg.gamma_step = 1.0;
      cfg.replications = {1};
      cfg.jobs = jobs;
      const ExperimentReport rep = run(cfg, &fdelta);
      write_report(rep, out_dir / ("table2_z" + std::to_string(zs)));
      const auto& strict = rep.seeds[0].set_param;
      os << "table2 |Z|=" << zs << ": Q<=0 "
         << interval_str(rep.seeds[0].set_nonparam) << "  strict "
         << interval_str(strict) << "\n";
      double hi = 40.0;
      if (!strict.intervals.empty() && !strict.intervals.back().open_hi)
        hi = strict.intervals.back().hi;
      strict_upper.push_back(hi);
      if (zs == 21) {
        for (const auto& iv : strict.intervals)
          contains_truth_at_21 =
              contains_truth_at_21 || (iv.lo <= 4.0 && 4.0 <= iv.hi);
      }
    }
    const bool monotone = strict_upper.front() >= strict_upper.back();
    os << "table2: strict upper endpoint shrinks from |Z|=3 to |Z|=21 -> "
       << (monotone ? "yes" : "no") << "; contains gamma0 at |Z|=21 -> "
       << (contains_truth_at_21 ? "yes" : "no") << "\n";
    out.pass = monotone && contains_truth_at_21;
  } else {
    throw std::invalid_argument("reproduce_paper: unknown target " + which);
  }
  out.summary = os.str();
  write_file_atomic(out_dir / ("reproduce_" + which + ".txt"), out.summary);
  return out;
}

}  // namespace netform
