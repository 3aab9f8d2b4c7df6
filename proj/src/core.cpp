#include "netform/core.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <set>

#include "netform/kernels.hpp"

namespace netform {

int Network::degree(int i) const {
  const std::uint64_t* r = row(i);
  std::uint64_t k = 0;
  for (std::size_t w = 0; w < words_; ++w) k += std::popcount(r[w]);
  return static_cast<int>(k);
}

std::size_t Network::edge_count() const {
  std::size_t s = 0;
  for (int i = 0; i < n_; ++i) s += degree(i);
  return s / 2;
}

void AgentData::validate() const {
  if (z.size() != static_cast<std::size_t>(n) * z_dim)
    throw std::invalid_argument("AgentData: z must have n rows");
  if (a.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("AgentData: a must have n entries");
  if (!z_support.empty() && z_dim == 1) {
    for (int i = 0; i < n; ++i) {
      bool found = false;
      for (double v : z_support)
        if (v == zv(i, 0)) { found = true; break; }
      if (!found)
        throw std::invalid_argument("AgentData: z value outside support");
    }
  }
}

double delta_index(const std::vector<double>& z_dyad,
                   const std::vector<double>& x_dyad, const Theta& theta) {
  if (z_dyad.size() != theta.beta.size() || x_dyad.size() != theta.gamma.size())
    throw std::invalid_argument("delta_index: dimension mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < z_dyad.size(); ++d) s += z_dyad[d] * theta.beta[d];
  for (std::size_t d = 0; d < x_dyad.size(); ++d) s += x_dyad[d] * theta.gamma[d];
  return s;
}

double DyadCovariates::z_index(int i, int j,
                               const std::vector<double>& beta) const {
  const double* zv = z_at(i, j);
  double s = 0.0;
  for (int d = 0; d < z_dim; ++d) s += zv[d] * beta[d];
  return s;
}

DyadCovariates build_dyad_z(const AgentData& agents, DyadKind kind) {
  const int d = agents.z_dim;
  if (kind == DyadKind::AbsDiff) {
    return build_dyad_z(agents, d, [d](const double* a, const double* b, double* out) {
      for (int m = 0; m < d; ++m) out[m] = std::abs(a[m] - b[m]);
    });
  }
  return build_dyad_z(agents, d + 1, [d](const double* a, const double* b, double* out) {
    out[0] = 1.0;
    for (int m = 0; m < d; ++m) out[m + 1] = std::abs(a[m] - b[m]);
  });
}

DyadCovariates build_dyad_z(
    const AgentData& agents, int z_dim,
    const std::function<void(const double*, const double*, double*)>& w) {
  DyadCovariates out;
  out.n = agents.n;
  out.z_dim = z_dim;
  out.z.resize(pair_count(agents.n) * z_dim);
  for (int i = 0; i < agents.n; ++i)
    for (int j = i + 1; j < agents.n; ++j)
      w(&agents.z[static_cast<std::size_t>(i) * agents.z_dim],
        &agents.z[static_cast<std::size_t>(j) * agents.z_dim],
        out.z.data() + pair_index(agents.n, i, j) * z_dim);
  return out;
}

std::vector<std::size_t> WeightedLinkConfig::eplus() const {
  std::vector<std::size_t> e;
  for (std::size_t m = 0; m < weights.size(); ++m)
    if (weights[m] > 0) e.push_back(m);
  return e;
}

std::vector<std::size_t> WeightedLinkConfig::eminus() const {
  std::vector<std::size_t> e;
  for (std::size_t m = 0; m < weights.size(); ++m)
    if (weights[m] < 0) e.push_back(m);
  return e;
}

void WeightedLinkConfig::validate() const {
  if (links.size() != weights.size())
    throw std::invalid_argument("config: links/weights size mismatch");
  std::set<int> in_s(agents.begin(), agents.end());
  if (in_s.size() != agents.size())
    throw std::invalid_argument("config: duplicate agents");
  std::set<std::pair<int, int>> seen;
  for (std::size_t m = 0; m < links.size(); ++m) {
    auto [a, b] = links[m];
    if (a >= b) throw std::invalid_argument("config: links must be (min,max)");
    if (!in_s.count(a) || !in_s.count(b))
      throw std::invalid_argument("config: link endpoint outside agent set");
    if (!seen.insert(links[m]).second)
      throw std::invalid_argument("config: duplicate link");
    if (weights[m] == 0.0)
      throw std::invalid_argument("config: zero weight");
  }
}

std::vector<std::pair<int, double>> incidence_sums(
    const WeightedLinkConfig& cfg) {
  std::vector<std::pair<int, double>> out;
  out.reserve(cfg.agents.size());
  for (int a : cfg.agents) {
    double s = 0.0;
    for (std::size_t m = 0; m < cfg.links.size(); ++m)
      if (cfg.links[m].first == a || cfg.links[m].second == a)
        s += cfg.weights[m];
    out.emplace_back(a, s);
  }
  return out;
}

RetainedSplit retained_and_differenced(const WeightedLinkConfig& cfg) {
  bool integral = true;
  for (double w : cfg.weights)
    if (w != std::round(w)) { integral = false; break; }
  const double tol = integral ? 0.0 : 1e-12;

  RetainedSplit split;
  for (auto& [agent, sigma] : incidence_sums(cfg)) {
    if (std::abs(sigma) <= tol)
      split.differenced.push_back(agent);
    else
      split.retained.push_back(agent);
  }
  return split;
}

namespace {
std::pair<int, int> canon(int a, int b) { return {std::min(a, b), std::max(a, b)}; }
}  // namespace

WeightedLinkConfig tetrad_config(int i, int j, int h, int k) {
  WeightedLinkConfig c;
  c.agents = {i, j, h, k};
  std::sort(c.agents.begin(), c.agents.end());
  c.links = {canon(i, j), canon(h, k), canon(i, k), canon(j, h)};
  c.weights = {1, 1, -1, -1};
  return c;
}

WeightedLinkConfig three_link_triad_config(int i, int j, int k) {
  WeightedLinkConfig c;
  c.agents = {i, j, k};
  std::sort(c.agents.begin(), c.agents.end());
  c.links = {canon(i, j), canon(i, k), canon(j, k)};
  c.weights = {1, 1, -1};
  return c;
}

WeightedLinkConfig two_link_triad_config(int i, int j, int k) {
  WeightedLinkConfig c;
  c.agents = {i, j, k};
  std::sort(c.agents.begin(), c.agents.end());
  c.links = {canon(i, j), canon(i, k)};
  c.weights = {1, -1};
  return c;
}

WeightedLinkConfig weighted_star_config(int i, int j, int k, int l) {
  WeightedLinkConfig c;
  c.agents = {i, j, k, l};
  std::sort(c.agents.begin(), c.agents.end());
  c.links = {canon(i, j), canon(i, k), canon(i, l)};
  c.weights = {1, 1, -2};
  return c;
}

WeightedLinkConfig hexad_config(const std::array<int, 6>& a) {
  WeightedLinkConfig c;
  c.agents.assign(a.begin(), a.end());
  std::sort(c.agents.begin(), c.agents.end());
  for (int m = 0; m < 6; ++m) {
    c.links.push_back(canon(a[m], a[(m + 1) % 6]));
    c.weights.push_back(m % 2 == 0 ? 1.0 : -1.0);
  }
  return c;
}

std::uint64_t Rng::splitmix(std::uint64_t x) {
  x += 0x9E3779B97f4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t Rng::next_u64() {
  // xorshift* keeps the generator self-contained and stable
  std::uint64_t x = state_;
  x ^= x >> 12;
  x ^= x << 25;
  x ^= x >> 27;
  state_ = x;
  return x * 0x2545F4914F6CDD1Dull;
}

double Rng::uniform01() {
  // 53-bit mantissa, strictly inside (0, 1)
  const std::uint64_t u = next_u64() >> 11;
  double v = (static_cast<double>(u) + 0.5) * 0x1.0p-53;
  return v;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01(), u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

double Rng::logistic() {
  const double u = uniform01();
  return std::log(u / (1.0 - u));
}

int Rng::uniform_int(int m) {
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(m));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return Rng::splitmix(base ^ Rng::splitmix(stream + 0x51ull));
}

}  // namespace netform
