#include "netform/covariates.hpp"

#include <bit>
#include <cmath>

#include "netform/kernels.hpp"

namespace netform {

int common_friends(const Network& net, int i, int j) {
  if (i == j) throw std::invalid_argument("common_friends: i == j");
  return static_cast<int>(
      kernels::ops().and_popcount(net.row(i), net.row(j), net.words_per_row()));
}

double jaccard(const Network& net, int i, int j) {
  if (i == j) throw std::invalid_argument("jaccard: i == j");
  const std::uint64_t* ri = net.row(i);
  const std::uint64_t* rj = net.row(j);
  const auto inter =
      kernels::ops().and_popcount(ri, rj, net.words_per_row());
  std::uint64_t uni = 0;
  for (std::size_t w = 0; w < net.words_per_row(); ++w)
    uni += std::popcount(ri[w] | rj[w]);
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double CovariateSpec::value(const Network& net, int i, int j) const {
  switch (kind) {
    case CovariateKind::CommonFriends:
      return static_cast<double>(::netform::common_friends(net, i, j));
    case CovariateKind::Jaccard:
      return ::netform::jaccard(net, i, j);
    case CovariateKind::Custom:
      return custom(net, i, j);
  }
  throw std::logic_error("unreachable");
}

void compute_all(const Network& net, const CovariateSpec& spec,
                 DyadCovariates& dyads) {
  const int n = net.n();
  dyads.x_dim = 1;
  dyads.x.assign(pair_count(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = spec.value(net, i, j);
      if (spec.kind == CovariateKind::Custom && (v < spec.lo || v > spec.hi))
        throw std::out_of_range("covariate value outside declared range");
      dyads.x[pair_index(n, i, j)] = v;
    }
}

bool check_local_externality(const CovariateSpec& spec, const Network& net) {
  Network work = net;
  const int n = net.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double base = spec.value(work, i, j);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (a == i || a == j || b == i || b == j) continue;
          const bool old = work.link(a, b);
          work.set_link(a, b, !old);
          const double v = spec.value(work, i, j);
          work.set_link(a, b, old);
          if (v != base) return false;
        }
    }
  return true;
}

namespace {

void apply_pattern(Network& net, int i, int j, int h, int k, bool tetrad) {
  // tetrad: ij, hk present; ik, jh absent. flipped: reversed.
  net.set_link(i, j, tetrad);
  net.set_link(h, k, tetrad);
  net.set_link(i, k, !tetrad);
  net.set_link(j, h, !tetrad);
}

}  // namespace

bool check_cpi(const CovariateSpec& spec, const Network& net, int i, int j,
               int h, int k) {
  if (net.link(i, h) || net.link(j, k))
    throw std::invalid_argument("check_cpi: tetrad not admissible");
  Network work = net;
  const std::array<std::pair<int, int>, 4> tetrad_links{
      std::pair{i, j}, {h, k}, {i, k}, {j, h}};
  apply_pattern(work, i, j, h, k, true);
  std::array<double, 4> under_t{};
  for (int e = 0; e < 4; ++e)
    under_t[e] = spec.value(work, tetrad_links[e].first, tetrad_links[e].second);
  apply_pattern(work, i, j, h, k, false);
  for (int e = 0; e < 4; ++e) {
    const double v =
        spec.value(work, tetrad_links[e].first, tetrad_links[e].second);
    if (v != under_t[e]) return false;
  }
  return true;
}

}  // namespace netform
