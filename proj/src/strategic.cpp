#include "netform/strategic.hpp"

#include <algorithm>
#include <numeric>

namespace netform {

SurplusBounds surplus_bounds(double base_index, const std::vector<double>& gamma,
                             const std::vector<double>& lo,
                             const std::vector<double>& hi) {
  SurplusBounds b{base_index, base_index};
  for (std::size_t m = 0; m < gamma.size(); ++m) {
    const double g = gamma[m];
    b.v_sup += g > 0 ? g * hi[m] : g * lo[m];
    b.v_inf += g > 0 ? g * lo[m] : g * hi[m];
  }
  return b;
}

RobustnessGraphs classify_links(const AgentData& agents,
                                const ShockMatrix& shocks, const Theta& theta,
                                const DyadCovariates& dyads,
                                const CovariateSpec& cov) {
  const int n = agents.n;
  RobustnessGraphs g;
  g.n = n;
  g.d.assign(pair_count(n), 0);
  g.pi.assign(pair_count(n), 0);
  const std::vector<double> lo(theta.gamma.size(), cov.lo);
  const std::vector<double> hi(theta.gamma.size(), cov.hi);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double base = dyads.z_index(i, j, theta.beta) + agents.a[i] +
                          agents.a[j] + shocks(i, j);
      const SurplusBounds b = surplus_bounds(base, theta.gamma, lo, hi);
      const std::size_t p = pair_index(n, i, j);
      // link forms iff surplus >= 0, so presence is robust when v_inf >= 0
      g.pi[p] = b.v_inf >= 0.0;
      g.d[p] = b.v_sup >= 0.0 && b.v_inf < 0.0;
    }
  return g;
}

StrategicNeighborhoods strategic_neighborhoods(const RobustnessGraphs& g) {
  const int n = g.n;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.nonrobust(i, j)) {
        int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  StrategicNeighborhoods out;
  out.n = n;
  out.component.assign(n, -1);
  std::vector<int> root_id(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (root_id[r] < 0) {
      root_id[r] = static_cast<int>(out.members.size());
      out.members.emplace_back();
    }
    out.component[i] = root_id[r];
    out.members[root_id[r]].push_back(i);
  }

  // closure per component: members plus their robust 1-neighbors
  std::vector<std::vector<int>> comp_closure(out.members.size());
  for (std::size_t c = 0; c < out.members.size(); ++c) {
    std::vector<int> acc = out.members[c];
    for (int m : out.members[c])
      for (int j = 0; j < n; ++j)
        if (j != m && g.robust_present(m, j)) acc.push_back(j);
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    comp_closure[c] = std::move(acc);
  }
  out.closure.resize(n);
  for (int i = 0; i < n; ++i) out.closure[i] = comp_closure[out.component[i]];
  return out;
}

PackedTetrads greedy_pack_tetrads(
    const StrategicNeighborhoods& nbhds,
    const std::optional<std::array<double, 4>>& z_match,
    const AgentData* agents) {
  const int n = nbhds.n;
  if (z_match && !agents)
    throw std::invalid_argument("greedy_pack_tetrads: z filter needs agents");

  PackedTetrads out;
  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<std::uint8_t> in_dep(n, 0);  // scratch

  auto closure_blocked = [&](int a) {
    for (int m : nbhds.closure[a])
      if (blocked[m]) return true;
    return false;
  };

  for (int i = 0; i < n - 3; ++i) {
    if (closure_blocked(i)) continue;
    for (int j = i + 1; j < n - 2; ++j) {
      if (closure_blocked(j)) continue;
      for (int h = j + 1; h < n - 1; ++h) {
        if (closure_blocked(h)) continue;
        for (int k = h + 1; k < n; ++k) {
          if (closure_blocked(k)) continue;
          if (z_match) {
            const auto& zm = *z_match;
            if (agents->zv(i, 0) != zm[0] || agents->zv(j, 0) != zm[1] ||
                agents->zv(h, 0) != zm[2] || agents->zv(k, 0) != zm[3])
              continue;
          }
          std::vector<int> dep;
          for (int a : {i, j, h, k})
            for (int m : nbhds.closure[a])
              if (!in_dep[m]) {
                in_dep[m] = 1;
                dep.push_back(m);
              }
          for (int m : dep) in_dep[m] = 0;
          std::sort(dep.begin(), dep.end());
          out.tetrads.push_back({i, j, h, k});
          out.dependence_sets.push_back(dep);
          for (int m : dep) blocked[m] = 1;
          break;  // i, j, h are now blocked; restart scan positions
        }
        if (closure_blocked(h)) break;
      }
      if (closure_blocked(j)) break;
    }
    if (closure_blocked(i)) continue;
  }
  return out;
}

bool check_tetrad_isolation(const StrategicNeighborhoods& nbhds, int i, int j,
                            int h, int k) {
  const std::array<int, 4> t{i, j, h, k};
  for (int a : t)
    for (int m : nbhds.comp_of(a))
      if (m != i && m != j && m != h && m != k) return false;
  return true;
}

}  // namespace netform
