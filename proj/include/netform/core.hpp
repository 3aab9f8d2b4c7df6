#pragma once
// Domain types shared by every module: networks, agent data, parameters,
// weighted link configurations and the latent-index algebra.

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netform {

// Index of unordered pair (i, j), i < j, among all n-choose-2 pairs.
inline std::size_t pair_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}
inline std::size_t pair_count(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

// Symmetric binary adjacency with zero diagonal, stored as packed bit rows.
class Network {
 public:
  Network() = default;
  explicit Network(int n)
      : n_(n), words_(static_cast<std::size_t>(n + 63) / 64),
        rows_(static_cast<std::size_t>(n) * words_, 0) {}

  int n() const { return n_; }
  std::size_t words_per_row() const { return words_; }

  bool link(int i, int j) const {
    if (i == j) return false;
    return (rows_[static_cast<std::size_t>(i) * words_ + j / 64] >>
            (j % 64)) & 1u;
  }
  void set_link(int i, int j, bool v) {
    if (i == j) throw std::invalid_argument("Network: no self links");
    set_bit(i, j, v);
    set_bit(j, i, v);
  }
  const std::uint64_t* row(int i) const {
    return rows_.data() + static_cast<std::size_t>(i) * words_;
  }
  int degree(int i) const;
  std::size_t edge_count() const;

  bool operator==(const Network&) const = default;

 private:
  void set_bit(int i, int j, bool v) {
    auto& w = rows_[static_cast<std::size_t>(i) * words_ + j / 64];
    const std::uint64_t m = std::uint64_t{1} << (j % 64);
    w = v ? (w | m) : (w & ~m);
  }
  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

// Per-agent exogenous characteristics and fixed effects.
struct AgentData {
  int n = 0;
  int z_dim = 0;
  std::vector<double> z;  // n x z_dim, row-major
  std::vector<double> a;  // n
  std::vector<double> z_support;  // admissible values when discrete (scalar z)

  double zv(int i, int d) const { return z[static_cast<std::size_t>(i) * z_dim + d]; }
  void validate() const;
};

// Symmetric pairwise shocks, upper triangle storage.
struct ShockMatrix {
  int n = 0;
  std::vector<double> eps;  // pair_count(n)
  double operator()(int i, int j) const { return eps[pair_index(n, i, j)]; }
  double& at(int i, int j) { return eps[pair_index(n, i, j)]; }
};

// Structural parameters (beta, gamma).
struct Theta {
  std::vector<double> beta;
  std::vector<double> gamma;
};

// z'beta + x'gamma
double delta_index(const std::vector<double>& z_dyad,
                   const std::vector<double>& x_dyad, const Theta& theta);

// Dyadic covariate tables. z entries are deterministic functions of the
// endpoint characteristics; x entries are filled from a realized network.
struct DyadCovariates {
  int n = 0;
  int z_dim = 0;
  int x_dim = 0;
  std::vector<double> z;  // pair_count(n) x z_dim
  std::vector<double> x;  // pair_count(n) x x_dim

  const double* z_at(int i, int j) const {
    return z.data() + pair_index(n, i, j) * z_dim;
  }
  const double* x_at(int i, int j) const {
    return x.data() + pair_index(n, i, j) * x_dim;
  }
  // z'beta for one pair
  double z_index(int i, int j, const std::vector<double>& beta) const;
};

// Builders for z_ij = w(Z_i, Z_j).
enum class DyadKind {
  AbsDiff,       // componentwise |Z_i - Z_j|
  ConstAbsDiff,  // (1, |Z_i - Z_j|): leading constant carries an intercept
};
DyadCovariates build_dyad_z(const AgentData& agents, DyadKind kind);
DyadCovariates build_dyad_z(
    const AgentData& agents, int z_dim,
    const std::function<void(const double*, const double*, double*)>& w);

// A subnetwork differencing scheme: links within an agent set with signed
// weights. E+ / E- partition the links by weight sign.
struct WeightedLinkConfig {
  std::vector<int> agents;                    // distinct, ascending
  std::vector<std::pair<int, int>> links;     // canonical (min,max), unique
  std::vector<double> weights;                // parallel to links, nonzero

  std::vector<std::size_t> eplus() const;
  std::vector<std::size_t> eminus() const;
  void validate() const;
};

// sigma_i = sum of weights over links incident to i; agents without incident
// links map to zero.
std::vector<std::pair<int, double>> incidence_sums(
    const WeightedLinkConfig& cfg);

// Split of cfg.agents into retained (sigma != 0) and differenced-out
// (sigma == 0) agents. Integer-valued weights compare exactly; real weights
// use a 1e-12 tolerance.
struct RetainedSplit {
  std::vector<int> retained;     // S_R
  std::vector<int> differenced;  // S_0
};
RetainedSplit retained_and_differenced(const WeightedLinkConfig& cfg);

// Canned configuration templates.
WeightedLinkConfig tetrad_config(int i, int j, int h, int k);
WeightedLinkConfig three_link_triad_config(int i, int j, int k);
WeightedLinkConfig two_link_triad_config(int i, int j, int k);
WeightedLinkConfig weighted_star_config(int i, int j, int k, int l);
WeightedLinkConfig hexad_config(const std::array<int, 6>& a);

// Deterministic RNG utilities (stdlib distributions are not pinned across
// implementations, so draws are generated from raw mt19937_64 words).
struct Rng {
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {}
  std::uint64_t next_u64();
  double uniform01();                       // (0, 1)
  double uniform(double lo, double hi);
  double normal();                          // Box-Muller, cached spare
  double logistic();                        // inverse CDF
  int uniform_int(int m);                   // {0, ..., m-1}

  static std::uint64_t splitmix(std::uint64_t x);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derive a stream seed for (base, stream) reproducibly.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace netform
