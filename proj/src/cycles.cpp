#include "netform/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace netform {

const char* config_name(ConfigClass c) {
  switch (c) {
    case ConfigClass::Tetrad: return "tetrad";
    case ConfigClass::ThreeLinkTriad: return "three_link_triad";
    case ConfigClass::TwoLinkTriad: return "two_link_triad";
    case ConfigClass::WeightedStar: return "weighted_star";
    case ConfigClass::Hexad: return "hexad";
  }
  return "?";
}

namespace {

struct AgentIds {
  std::vector<int> zid;        // per agent
  std::vector<double> zvals;   // distinct support values
  int m = 0;
};

AgentIds agent_ids(const AgentData& ag) {
  if (ag.z_dim != 1 || ag.z_support.empty())
    throw std::invalid_argument(
        "scan_config: needs discrete scalar agent characteristics");
  AgentIds ids;
  ids.zvals = ag.z_support;
  std::sort(ids.zvals.begin(), ids.zvals.end());
  ids.m = static_cast<int>(ids.zvals.size());
  if (ids.m > 32) throw std::invalid_argument("scan_config: support too large");
  ids.zid.resize(ag.n);
  for (int i = 0; i < ag.n; ++i)
    ids.zid[i] = static_cast<int>(
        std::lower_bound(ids.zvals.begin(), ids.zvals.end(), ag.zv(i, 0)) -
        ids.zvals.begin());
  return ids;
}

struct FlatCells {
  std::vector<std::uint64_t> count;
  std::vector<std::vector<BoundRecord>> pat, flip;
  explicit FlatCells(std::size_t n) : count(n, 0), pat(n), flip(n) {}
};

BoundTable scan_three_link(const SimDraw& draw, const std::vector<double>& beta) {
  const int n = draw.agents.n;
  AgentIds ids = agent_ids(draw.agents);
  const std::size_t m = ids.m;
  FlatCells cells(m * m * m);  // (z_i; sorted z_j, z_k)

  std::vector<double> zd(pair_count(n));
  std::vector<double> xv(pair_count(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      zd[pair_index(n, i, j)] = draw.dyads.z_index(i, j, beta);
      if (draw.has_x) xv[pair_index(n, i, j)] = draw.dyads.x[pair_index(n, i, j)];
    }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) {
      if (j == i) continue;
      for (int k = j + 1; k < n; ++k) {
        if (k == i) continue;
        const std::size_t pij = pair_index(n, i, j);
        const std::size_t pik = pair_index(n, i, k);
        const std::size_t pjk = pair_index(n, j, k);
        const int zj = ids.zid[j], zk = ids.zid[k];
        const std::size_t cell =
            (static_cast<std::size_t>(ids.zid[i]) * m +
             std::min(zj, zk)) * m + std::max(zj, zk);
        ++cells.count[cell];
        const bool yij = draw.network.link(i, j);
        const bool yik = draw.network.link(i, k);
        const bool yjk = draw.network.link(j, k);
        const bool pat = yij && yik && !yjk;
        const bool flip = !yij && !yik && yjk;
        if (!pat && !flip) continue;
        const double a = (zd[pij] + zd[pik]) - zd[pjk];
        const double b = (xv[pij] + xv[pik]) - xv[pjk];
        if (pat) cells.pat[cell].push_back({a, b});
        else cells.flip[cell].push_back({a, b});
      }
    }

  BoundTable t;
  t.config_name = config_name(ConfigClass::ThreeLinkTriad);
  t.beta = beta;
  std::map<int, RetainedGroup> groups;
  for (std::size_t cell = 0; cell < cells.count.size(); ++cell) {
    if (!cells.count[cell]) continue;
    const int zi = static_cast<int>(cell / (m * m));
    const int zlo = static_cast<int>((cell / m) % m);
    const int zhi = static_cast<int>(cell % m);
    auto& g = groups[zi];
    if (g.key.empty()) g.key = {ids.zvals[zi]};
    ProfileCell pc;
    pc.key = {ids.zvals[zlo], ids.zvals[zhi]};
    pc.count = cells.count[cell];
    pc.pat = std::move(cells.pat[cell]);
    pc.flip = std::move(cells.flip[cell]);
    g.cells.push_back(std::move(pc));
  }
  for (auto& [_, g] : groups) t.groups.push_back(std::move(g));
  return t;
}

BoundTable scan_two_link(const SimDraw& draw, const std::vector<double>& beta) {
  const int n = draw.agents.n;
  AgentIds ids = agent_ids(draw.agents);
  const std::size_t m = ids.m;
  FlatCells cells(m * m * m);  // (z_j, z_k ordered; z_i)

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::size_t pij = pair_index(n, i, j);
      const double zdij = draw.dyads.z_index(i, j, beta);
      const double xij = draw.has_x ? draw.dyads.x[pij] : 0.0;
      const bool yij = draw.network.link(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const std::size_t pik = pair_index(n, i, k);
        const std::size_t cell =
            (static_cast<std::size_t>(ids.zid[j]) * m + ids.zid[k]) * m +
            ids.zid[i];
        ++cells.count[cell];
        const bool yik = draw.network.link(i, k);
        const bool pat = yij && !yik;
        const bool flip = !yij && yik;
        if (!pat && !flip) continue;
        const double a = zdij - draw.dyads.z_index(i, k, beta);
        const double b = xij - (draw.has_x ? draw.dyads.x[pik] : 0.0);
        if (pat) cells.pat[cell].push_back({a, b});
        else cells.flip[cell].push_back({a, b});
      }
    }

  BoundTable t;
  t.config_name = config_name(ConfigClass::TwoLinkTriad);
  t.beta = beta;
  std::map<std::pair<int, int>, RetainedGroup> groups;
  for (std::size_t cell = 0; cell < cells.count.size(); ++cell) {
    if (!cells.count[cell]) continue;
    const int zj = static_cast<int>(cell / (m * m));
    const int zk = static_cast<int>((cell / m) % m);
    const int zi = static_cast<int>(cell % m);
    auto& g = groups[{zj, zk}];
    if (g.key.empty()) g.key = {ids.zvals[zj], ids.zvals[zk]};
    ProfileCell pc;
    pc.key = {ids.zvals[zi]};
    pc.count = cells.count[cell];
    pc.pat = std::move(cells.pat[cell]);
    pc.flip = std::move(cells.flip[cell]);
    g.cells.push_back(std::move(pc));
  }
  for (auto& [_, g] : groups) t.groups.push_back(std::move(g));
  return t;
}

BoundTable scan_star(const SimDraw& draw, const std::vector<double>& beta) {
  const int n = draw.agents.n;
  AgentIds ids = agent_ids(draw.agents);
  const std::size_t m = ids.m;
  FlatCells cells(m * m * m * m);  // (sorted z_j z_k, z_l; z_i)

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) {
      if (j == i) continue;
      const double zdij = draw.dyads.z_index(i, j, beta);
      const double xij = draw.has_x ? draw.dyads.x[pair_index(n, i, j)] : 0.0;
      const bool yij = draw.network.link(i, j);
      for (int k = j + 1; k < n; ++k) {
        if (k == i) continue;
        const double zdik = draw.dyads.z_index(i, k, beta);
        const double xik = draw.has_x ? draw.dyads.x[pair_index(n, i, k)] : 0.0;
        const bool yik = draw.network.link(i, k);
        const double sum_zd = zdij + zdik;
        const double sum_x = xij + xik;
        const int zjk_lo = std::min(ids.zid[j], ids.zid[k]);
        const int zjk_hi = std::max(ids.zid[j], ids.zid[k]);
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const std::size_t cell =
              ((static_cast<std::size_t>(zjk_lo) * m + zjk_hi) * m +
               ids.zid[l]) * m + ids.zid[i];
          ++cells.count[cell];
          const bool yil = draw.network.link(i, l);
          const bool pat = yij && yik && !yil;
          const bool flip = !yij && !yik && yil;
          if (!pat && !flip) continue;
          const std::size_t pil = pair_index(n, i, l);
          const double a = sum_zd + (-2.0) * draw.dyads.z_index(i, l, beta);
          const double b = sum_x + (-2.0) * (draw.has_x ? draw.dyads.x[pil] : 0.0);
          if (pat) cells.pat[cell].push_back({a, b});
          else cells.flip[cell].push_back({a, b});
        }
      }
    }

  BoundTable t;
  t.config_name = config_name(ConfigClass::WeightedStar);
  t.beta = beta;
  std::map<std::array<int, 3>, RetainedGroup> groups;
  for (std::size_t cell = 0; cell < cells.count.size(); ++cell) {
    if (!cells.count[cell]) continue;
    const int zlo = static_cast<int>(cell / (m * m * m));
    const int zhi = static_cast<int>((cell / (m * m)) % m);
    const int zl = static_cast<int>((cell / m) % m);
    const int zi = static_cast<int>(cell % m);
    auto& g = groups[{zlo, zhi, zl}];
    if (g.key.empty()) g.key = {ids.zvals[zlo], ids.zvals[zhi], ids.zvals[zl]};
    ProfileCell pc;
    pc.key = {ids.zvals[zi]};
    pc.count = cells.count[cell];
    pc.pat = std::move(cells.pat[cell]);
    pc.flip = std::move(cells.flip[cell]);
    g.cells.push_back(std::move(pc));
  }
  for (auto& [_, g] : groups) t.groups.push_back(std::move(g));
  return t;
}

// alternating 6-cycle, sampled
BoundTable scan_hexad(const SimDraw& draw, const std::vector<double>& beta,
                      const CycleScanOptions& opt) {
  const int n = draw.agents.n;
  if (n < 6) throw std::invalid_argument("scan_hexad: n < 6");
  AgentIds ids = agent_ids(draw.agents);

  // full dihedral orbit: one canonical tuple per physical 6-cycle, both
  // sign orientations are recorded from it explicitly
  auto tuple_images = [](const std::array<int, 6>& t) {
    std::array<std::array<int, 6>, 12> im;
    const std::array<int, 6> rev{t[5], t[4], t[3], t[2], t[1], t[0]};
    for (int r = 0; r < 6; ++r) {
      for (int p = 0; p < 6; ++p) {
        im[r][p] = t[(p + r) % 6];
        im[6 + r][p] = rev[(p + r) % 6];
      }
    }
    return im;
  };

  auto pack = [](const std::array<int, 6>& t) {
    std::uint64_t k = 0;
    for (int v : t) k = (k << 10) | static_cast<std::uint64_t>(v);
    return k;
  };

  Rng rng(derive_seed(opt.hexad_seed, 0x48585844ull));
  std::unordered_set<std::uint64_t> seen;
  std::map<std::array<double, 6>, std::size_t> cell_of;
  std::vector<ProfileCell> cells;

  auto edge_value_key = [&](const std::array<std::size_t, 6>& eidx,
                            const std::vector<double>& zedge) {
    // lexicographic minimum over the sign-preserving edge permutations
    std::array<double, 6> base;
    for (int e = 0; e < 6; ++e) base[e] = zedge[eidx[e]];
    std::array<double, 6> best = base;
    for (int r = 0; r < 3; ++r) {
      std::array<double, 6> rot, refl;
      for (int e = 0; e < 6; ++e) rot[e] = base[(e + 2 * r) % 6];
      // reversal maps edge m to edge (4 - m) mod 6 before rotation
      for (int e = 0; e < 6; ++e) refl[e] = base[(10 - e - 2 * r) % 6];
      best = std::min(best, rot);
      best = std::min(best, refl);
    }
    return best;
  };

  // dyadic z values per pair for keys
  std::vector<double> zedge(pair_count(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      zedge[pair_index(n, i, j)] =
          std::abs(draw.agents.zv(i, 0) - draw.agents.zv(j, 0));

  auto cell_index = [&](const std::array<double, 6>& key) {
    auto it = cell_of.find(key);
    if (it != cell_of.end()) return it->second;
    const std::size_t idx = cells.size();
    cell_of.emplace(key, idx);
    ProfileCell pc;
    pc.key.assign(key.begin(), key.end());
    cells.push_back(std::move(pc));
    return idx;
  };

  for (std::uint64_t s = 0; s < opt.hexad_samples; ++s) {
    std::array<int, 6> t;
    bool distinct = true;
    for (int p = 0; p < 6; ++p) {
      t[p] = rng.uniform_int(n);
      for (int q = 0; q < p; ++q)
        if (t[q] == t[p]) { distinct = false; break; }
      if (!distinct) break;
    }
    if (!distinct) continue;
    // canonical representative of the physical cycle
    auto im = tuple_images(t);
    std::array<int, 6> canon = t;
    for (const auto& u : im) canon = std::min(canon, u);
    if (!seen.insert(pack(canon)).second) continue;
    t = canon;

    std::array<std::size_t, 6> eidx;
    std::array<bool, 6> ye;
    std::array<double, 6> zd, xe;
    for (int e = 0; e < 6; ++e) {
      const int u = t[e], v = t[(e + 1) % 6];
      eidx[e] = pair_index(n, u, v);
      ye[e] = draw.network.link(u, v);
      zd[e] = draw.dyads.z_index(u, v, beta);
      xe[e] = draw.has_x ? draw.dyads.x[eidx[e]] : 0.0;
    }
    bool patA = true, patB = true;
    for (int e = 0; e < 6; ++e) {
      const bool want_present = (e % 2 == 0);
      if (ye[e] != want_present) patA = false;
      if (ye[e] != !want_present) patB = false;
    }
    double aA = 0.0, bA = 0.0, aB = 0.0, bB = 0.0;
    for (int e = 0; e < 6; ++e) {
      const double w = (e % 2 == 0) ? 1.0 : -1.0;
      aA += w * zd[e];
      bA += w * xe[e];
      aB += -w * zd[e];
      bB += -w * xe[e];
    }
    const auto keyA = edge_value_key(eidx, zedge);
    // orientation B flips signs: its edge vector starts one step later
    std::array<std::size_t, 6> eidxB;
    for (int e = 0; e < 6; ++e) eidxB[e] = eidx[(e + 1) % 6];
    const auto keyB = edge_value_key(eidxB, zedge);
    const std::size_t cA = cell_index(keyA);
    const std::size_t cB = cell_index(keyB);
    ++cells[cA].count;
    ++cells[cB].count;
    if (patA) {
      cells[cA].pat.push_back({aA, bA});
      cells[cB].flip.push_back({aB, bB});
    }
    if (patB) {
      cells[cB].pat.push_back({aB, bB});
      cells[cA].flip.push_back({aA, bA});
    }
  }

  BoundTable t;
  t.config_name = config_name(ConfigClass::Hexad);
  t.beta = beta;
  t.groups.resize(1);
  for (auto& [key, idx] : cell_of)
    t.groups[0].cells.push_back(std::move(cells[idx]));
  return t;
}

}  // namespace

BoundTable scan_config(const SimDraw& draw, ConfigClass cls,
                       const std::vector<double>& beta,
                       const CycleScanOptions& opt) {
  switch (cls) {
    case ConfigClass::Tetrad: return scan_tetrads(draw, beta);
    case ConfigClass::ThreeLinkTriad: return scan_three_link(draw, beta);
    case ConfigClass::TwoLinkTriad: return scan_two_link(draw, beta);
    case ConfigClass::WeightedStar: return scan_star(draw, beta);
    case ConfigClass::Hexad: return scan_hexad(draw, beta, opt);
  }
  throw std::logic_error("unreachable");
}

namespace {

// slot permutations preserving links and weights
std::vector<std::vector<int>> template_automorphisms(
    const WeightedLinkConfig& tpl) {
  const int m = static_cast<int>(tpl.agents.size());
  std::map<std::pair<int, int>, double> w;
  for (std::size_t e = 0; e < tpl.links.size(); ++e) w[tpl.links[e]] = tpl.weights[e];

  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  std::vector<std::vector<int>> auts;
  do {
    bool ok = true;
    for (auto& [link, weight] : w) {
      const int a = perm[link.first], b = perm[link.second];
      auto it = w.find({std::min(a, b), std::max(a, b)});
      if (it == w.end() || it->second != weight) { ok = false; break; }
    }
    if (ok) auts.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return auts;
}

}  // namespace

GeneralBoundResult general_cycle_bounds(const SimDraw& draw,
                                        const WeightedLinkConfig& slot_template,
                                        const std::string& name,
                                        const std::vector<double>& beta,
                                        double gamma, double c,
                                        std::uint64_t cell_min) {
  slot_template.validate();
  const int m = static_cast<int>(slot_template.agents.size());
  const int n = draw.agents.n;
  if (m > 6) throw std::invalid_argument("general_cycle_bounds: m > 6");
  double visits = 1;
  for (int p = 0; p < m; ++p) visits *= n - p;
  if (visits > 5e7)
    throw std::invalid_argument("general_cycle_bounds: instance too large");

  GeneralBoundResult out;
  out.config_name = name;
  out.c = c;
  const RetainedSplit split = retained_and_differenced(slot_template);
  out.no_differencing_warning = split.differenced.empty();

  const auto auts = template_automorphisms(slot_template);
  const bool complete = split.retained.empty();

  // Edge images per automorphism (for key canonicalization).
  const std::size_t ne = slot_template.links.size();
  std::vector<std::vector<int>> edge_image(auts.size(), std::vector<int>(ne));
  for (std::size_t a = 0; a < auts.size(); ++a)
    for (std::size_t e = 0; e < ne; ++e) {
      const int u = auts[a][slot_template.links[e].first];
      const int v = auts[a][slot_template.links[e].second];
      for (std::size_t f = 0; f < ne; ++f)
        if (slot_template.links[f] ==
            std::make_pair(std::min(u, v), std::max(u, v)))
          edge_image[a][e] = static_cast<int>(f);
    }

  std::map<std::vector<double>, std::map<std::vector<double>, ProfileCell>> acc;

  std::vector<int> slots(m, -1);
  std::vector<bool> used(n, false);
  std::vector<double> zeta(ne), zeta_img(ne);

  auto visit = [&]() {
    // canonical instance: lexicographically minimal among automorphism images
    for (const auto& aut : auts) {
      for (int p = 0; p < m; ++p) {
        const int v = slots[aut[p]];
        if (v < slots[p]) return;  // not the orbit representative
        if (v > slots[p]) break;
      }
    }
    bool pat = true, flip = true;
    double a_fold = 0.0, b_fold = 0.0;
    for (std::size_t e = 0; e < ne; ++e) {
      const int u = slots[slot_template.links[e].first];
      const int v = slots[slot_template.links[e].second];
      const bool y = draw.network.link(u, v);
      const bool present = slot_template.weights[e] > 0;
      if (y != present) pat = false;
      if (y != !present) flip = false;
      const double zd = draw.dyads.z_index(u, v, beta);
      const double xv =
          draw.has_x ? draw.dyads.x[pair_index(n, u, v)] : 0.0;
      a_fold += slot_template.weights[e] * zd;
      b_fold += slot_template.weights[e] * xv;
      zeta[e] = std::abs(draw.agents.zv(u, 0) - draw.agents.zv(v, 0));
    }
    // keys
    std::vector<double> zr, z0;
    if (complete) {
      // dyadic covariate key, canonicalized over automorphism edge images
      std::vector<double> best = zeta;
      for (std::size_t a = 1; a < auts.size(); ++a) {
        for (std::size_t e = 0; e < ne; ++e)
          zeta_img[static_cast<std::size_t>(edge_image[a][e])] = zeta[e];
        if (zeta_img < best) best = zeta_img;
      }
      z0 = best;
    } else {
      // canonicalize agent-value keys over automorphisms
      std::vector<double> best_all;
      for (const auto& aut : auts) {
        std::vector<double> cur;
        for (int s : split.retained)
          cur.push_back(draw.agents.zv(slots[aut[s]], 0));
        for (int s : split.differenced)
          cur.push_back(draw.agents.zv(slots[aut[s]], 0));
        if (best_all.empty() || cur < best_all) best_all = cur;
      }
      zr.assign(best_all.begin(), best_all.begin() + split.retained.size());
      z0.assign(best_all.begin() + split.retained.size(), best_all.end());
    }
    ProfileCell& cell = acc[zr][z0];
    if (cell.key.empty() && !z0.empty()) cell.key = z0;
    ++cell.count;
    if (pat) cell.pat.push_back({a_fold, b_fold});
    if (flip) cell.flip.push_back({a_fold, b_fold});
  };

  std::function<void(int)> rec = [&](int p) {
    if (p == m) {
      visit();
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      slots[p] = v;
      rec(p + 1);
      used[v] = false;
    }
  };
  rec(0);

  out.table.config_name = name;
  out.table.beta = beta;
  for (auto& [zr, cellmap] : acc) {
    RetainedGroup g;
    g.key = zr;
    for (auto& [z0, cell] : cellmap) {
      ProfileCell pc = std::move(cell);
      pc.key = z0;
      g.cells.push_back(std::move(pc));
    }
    out.table.groups.push_back(std::move(g));
  }
  out.bounds = evaluate_bounds(out.table, gamma, c, cell_min);
  return out;
}

AggregateResult aggregate_criterion(const std::vector<BoundTable>& tables,
                                    double gamma, const CriterionOptions& opt) {
  AggregateResult r;
  for (const auto& t : tables) {
    const CriterionResult cr = criterion_nonparametric(t, gamma, opt);
    if (cr.q > r.q) {
      r.q = cr.q;
      r.binding_config = t.config_name;
    }
  }
  r.in_identified_set = r.q <= 0.0;
  return r;
}

std::vector<BoundTable> scan_class_set(const SimDraw& draw,
                                       const std::vector<ConfigClass>& classes,
                                       const std::vector<double>& beta,
                                       const CycleScanOptions& opt) {
  std::vector<BoundTable> out;
  out.reserve(classes.size());
  for (ConfigClass c : classes) out.push_back(scan_config(draw, c, beta, opt));
  return out;
}

}  // namespace netform
