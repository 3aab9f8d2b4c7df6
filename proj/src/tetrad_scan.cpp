#include "netform/tetrad_scan.hpp"

#include <algorithm>
#include <cmath>

namespace netform {

namespace {

struct PairData {
  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> zid;
  std::vector<double> zdelta;
  std::vector<double> x;
  std::vector<double> zval;  // dyadic z value per id
  int n_ids = 0;
};

PairData precompute_pairs(const SimDraw& draw, const std::vector<double>& beta) {
  const auto& ag = draw.agents;
  if (ag.z_dim != 1 || ag.z_support.empty())
    throw std::invalid_argument(
        "scan_tetrads: needs discrete scalar agent characteristics");
  const int n = ag.n;
  const int m = static_cast<int>(ag.z_support.size());

  // ids for distinct dyadic values |s_a - s_b|
  std::vector<double> dvals;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) dvals.push_back(std::abs(ag.z_support[a] - ag.z_support[b]));
  std::sort(dvals.begin(), dvals.end());
  dvals.erase(std::unique(dvals.begin(), dvals.end()), dvals.end());
  if (dvals.size() > 32)
    throw std::invalid_argument("scan_tetrads: dyadic support too large");

  auto did = [&](double v) {
    return static_cast<std::uint8_t>(
        std::lower_bound(dvals.begin(), dvals.end(), v) - dvals.begin());
  };

  PairData pd;
  pd.n_ids = static_cast<int>(dvals.size());
  pd.zval = dvals;
  const std::size_t np = pair_count(n);
  pd.y.resize(np);
  pd.zid.resize(np);
  pd.zdelta.resize(np);
  pd.x.assign(np, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::size_t p = pair_index(n, i, j);
      pd.y[p] = draw.network.link(i, j);
      pd.zid[p] = did(std::abs(ag.zv(i, 0) - ag.zv(j, 0)));
      pd.zdelta[p] = draw.dyads.z_index(i, j, beta);
      if (draw.has_x) pd.x[p] = draw.dyads.x[p];
    }
  return pd;
}

}  // namespace

BoundTable scan_tetrads(const SimDraw& draw, const std::vector<double>& beta,
                        std::uint64_t) {
  const int n = draw.agents.n;
  PairData pd = precompute_pairs(draw, beta);
  const std::size_t P = pd.n_ids;
  const std::size_t P2 = P * P;
  const std::size_t ncell = P2 * P2;

  std::vector<std::uint64_t> count(ncell, 0);
  std::vector<std::vector<BoundRecord>> pat(ncell), flip(ncell);

  auto half_key = [&](std::uint8_t u, std::uint8_t v) -> std::size_t {
    return u <= v ? u * P + v : v * P + u;
  };

  for (int a = 0; a < n - 3; ++a)
    for (int b = a + 1; b < n - 2; ++b) {
      const std::size_t pab = pair_index(n, a, b);
      for (int c = b + 1; c < n - 1; ++c) {
        const std::size_t pac = pair_index(n, a, c);
        const std::size_t pbc = pair_index(n, b, c);
        for (int d = c + 1; d < n; ++d) {
          const std::size_t pad = pair_index(n, a, d);
          const std::size_t pbd = pair_index(n, b, d);
          const std::size_t pcd = pair_index(n, c, d);
          // the three perfect matchings of {a,b,c,d}
          const std::size_t match[3][2] = {
              {pab, pcd}, {pac, pbd}, {pad, pbc}};
          for (int mp = 0; mp < 3; ++mp)
            for (int mq = mp + 1; mq < 3; ++mq) {
              const std::size_t p1 = match[mp][0], p2 = match[mp][1];
              const std::size_t q1 = match[mq][0], q2 = match[mq][1];
              const std::size_t fk = half_key(pd.zid[p1], pd.zid[p2]);
              const std::size_t bk = half_key(pd.zid[q1], pd.zid[q2]);
              const std::size_t cellA = fk * P2 + bk;
              const std::size_t cellB = bk * P2 + fk;
              ++count[cellA];
              ++count[cellB];
              const bool patA = pd.y[p1] && pd.y[p2] && !pd.y[q1] && !pd.y[q2];
              const bool patB = pd.y[q1] && pd.y[q2] && !pd.y[p1] && !pd.y[p2];
              if (!patA && !patB) continue;
              const double aA =
                  ((pd.zdelta[p1] + pd.zdelta[p2]) - pd.zdelta[q1]) -
                  pd.zdelta[q2];
              const double bA = ((pd.x[p1] + pd.x[p2]) - pd.x[q1]) - pd.x[q2];
              const double aB =
                  ((pd.zdelta[q1] + pd.zdelta[q2]) - pd.zdelta[p1]) -
                  pd.zdelta[p2];
              const double bB = ((pd.x[q1] + pd.x[q2]) - pd.x[p1]) - pd.x[p2];
              if (patA) {
                pat[cellA].push_back({aA, bA});
                flip[cellB].push_back({aB, bB});
              } else {  // patB
                pat[cellB].push_back({aB, bB});
                flip[cellA].push_back({aA, bA});
              }
            }
        }
      }
    }

  BoundTable table;
  table.config_name = "tetrad";
  table.beta = beta;
  table.groups.resize(1);
  RetainedGroup& g = table.groups[0];
  for (std::size_t cell = 0; cell < ncell; ++cell) {
    if (count[cell] == 0) continue;
    ProfileCell pc;
    const std::size_t fk = cell / P2, bk = cell % P2;
    pc.key = {pd.zval[fk / P], pd.zval[fk % P], pd.zval[bk / P],
              pd.zval[bk % P]};
    pc.count = count[cell];
    pc.pat = std::move(pat[cell]);
    pc.flip = std::move(flip[cell]);
    g.cells.push_back(std::move(pc));
  }
  return table;
}

TetradTerms tetrad_indicator_terms(const SimDraw& draw, int i, int j, int h,
                                   int k, const Theta& theta) {
  const std::array<int, 4> ids{i, j, h, k};
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      if (ids[u] == ids[v])
        throw std::invalid_argument("tetrad_indicator_terms: repeated agent");

  auto delta = [&](int u, int v) {
    double s = draw.dyads.z_index(u, v, theta.beta);
    if (!theta.gamma.empty() && draw.has_x)
      s += theta.gamma[0] * draw.dyads.x[pair_index(draw.agents.n, u, v)];
    return s;
  };
  TetradTerms t;
  const bool yij = draw.network.link(i, j), yhk = draw.network.link(h, k);
  const bool yik = draw.network.link(i, k), yjh = draw.network.link(j, h);
  t.tetrad_pattern = yij && yhk && !yik && !yjh;
  t.flipped = !yij && !yhk && yik && yjh;
  t.delta_contrast = ((delta(i, j) + delta(h, k)) - delta(i, k)) - delta(j, h);
  return t;
}

double tetrad_shock_contrast(const ShockMatrix& shocks, int i, int j, int h,
                             int k) {
  return -(((shocks(i, j) + shocks(h, k)) - shocks(i, k)) - shocks(j, h));
}

}  // namespace netform
