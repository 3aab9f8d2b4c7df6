#include "netform/fdelta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netform/core.hpp"

namespace netform {

double DeltaDistribution::difference_density(double x) {
  // f_D(x) = e^x ((e^x + 1) x - 2 (e^x - 1)) / (e^x - 1)^3, even in x.
  const double ax = std::abs(x);
  if (ax < 1e-3) {
    const double e = std::expm1(ax);
    return 1.0 / 6.0 - e * e / 60.0;
  }
  if (ax > 500.0) return 0.0;
  const double em = std::expm1(ax);
  const double a = em + 1.0;
  return a * ((a + 1.0) * ax - 2.0 * em) / (em * em * em);
}

namespace {

// CDF of the difference of two iid Logistic(0,1):
//   F_D(x) = 1/(1-e^-x) - x e^-x / (1-e^-x)^2   for x > 0, symmetric.
double difference_cdf(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax < 1e-4) {
    v = 0.5 + ax / 6.0 - ax * ax * ax / 180.0;
  } else if (ax > 500.0) {
    v = 1.0;
  } else {
    const double d = -std::expm1(-ax);  // 1 - e^-x
    const double u = 1.0 - d;           // e^-x
    v = 1.0 / d - ax * u / (d * d);
  }
  return x >= 0 ? v : 1.0 - v;
}

struct ConvGrid {
  double lo, step;
  std::vector<double> cdf;
};

// F_Delta(c) = int f_D(u) F_D(c - u) du via composite Simpson on a shared
// grid, so the shifted CDF evaluations are table lookups.
ConvGrid convolve_once(double lo, double hi, double step) {
  std::size_t m = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
  if (m % 2 == 0) ++m;  // Simpson needs an even interval count

  std::vector<double> fd(m), w(m);
  for (std::size_t i = 0; i < m; ++i) {
    fd[i] = DeltaDistribution::difference_density(lo + step * i);
    w[i] = (i == 0 || i == m - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  }

  // F_D((i-j) step) for i-j in [-(m-1), m-1]
  std::vector<double> fdt(2 * m - 1);
  for (std::size_t d = 0; d < 2 * m - 1; ++d)
    fdt[d] = difference_cdf((static_cast<double>(d) - static_cast<double>(m - 1)) * step);

  ConvGrid out{lo, step, std::vector<double>(m, 0.0)};
  const double h3 = step / 3.0;
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    const double* shifted = fdt.data() + (m - 1) - 0 + 0;
    for (std::size_t j = 0; j < m; ++j)
      s += w[j] * fd[j] * shifted[static_cast<std::ptrdiff_t>(i) -
                                  static_cast<std::ptrdiff_t>(j)];
    out.cdf[i] = s * h3;
  }

  // enforce symmetry, range and monotonicity
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t r = m - 1 - i;
    if (i > r) break;
    const double a = out.cdf[i], b = out.cdf[r];
    const double sym = 0.5 * (a + 1.0 - b);
    out.cdf[i] = std::clamp(sym, 0.0, 1.0);
    out.cdf[r] = std::clamp(1.0 - sym, 0.0, 1.0);
  }
  for (std::size_t i = 1; i < m; ++i)
    out.cdf[i] = std::max(out.cdf[i], out.cdf[i - 1]);
  return out;
}

}  // namespace

DeltaDistribution DeltaDistribution::numerical_convolution(double tol) {
  const double lo = -80.0, hi = 80.0;
  double step = 0.05;
  ConvGrid cur = convolve_once(lo, hi, step);
  for (int pass = 0; pass < 3; ++pass) {
    ConvGrid fine = convolve_once(lo, hi, step / 2);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.cdf.size(); ++i)
      diff = std::max(diff, std::abs(cur.cdf[i] - fine.cdf[2 * i]));
    cur = std::move(fine);
    step /= 2;
    if (diff < tol) break;
  }
  DeltaDistribution d;
  d.method_ = FdeltaMethod::NumericalConvolution;
  d.grid_.resize(cur.cdf.size());
  for (std::size_t i = 0; i < cur.cdf.size(); ++i) d.grid_[i] = lo + cur.step * i;
  d.cdf_ = std::move(cur.cdf);
  return d;
}

DeltaDistribution DeltaDistribution::monte_carlo(std::size_t draws,
                                                 std::uint64_t seed) {
  DeltaDistribution d;
  d.method_ = FdeltaMethod::MonteCarlo;
  d.samples_.resize(draws);
  Rng rng(seed);
  for (std::size_t m = 0; m < draws; ++m) {
    const double e1 = rng.logistic(), e2 = rng.logistic();
    const double e3 = rng.logistic(), e4 = rng.logistic();
    d.samples_[m] = e1 + e2 - e3 - e4;
  }
  std::sort(d.samples_.begin(), d.samples_.end());
  return d;
}

double DeltaDistribution::cdf(double c) const {
  if (method_ == FdeltaMethod::MonteCarlo) {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), c);
    return static_cast<double>(it - samples_.begin()) /
           static_cast<double>(samples_.size());
  }
  if (c <= grid_.front()) return 0.0;
  if (c >= grid_.back()) return 1.0;
  const double step = grid_[1] - grid_[0];
  const double t = (c - grid_.front()) / step;
  const std::size_t k = static_cast<std::size_t>(t);
  const double fr = t - static_cast<double>(k);
  return cdf_[k] + fr * (cdf_[k + 1] - cdf_[k]);
}

double DeltaDistribution::quantile(double p) const {
  if (method_ == FdeltaMethod::MonteCarlo) {
    const std::size_t k = std::min(
        samples_.size() - 1,
        static_cast<std::size_t>(p * static_cast<double>(samples_.size())));
    return samples_[k];
  }
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
  if (it == cdf_.end()) return grid_.back();
  return grid_[static_cast<std::size_t>(it - cdf_.begin())];
}

FdeltaPair build_fdelta_checked(std::size_t mc_draws, std::uint64_t seed,
                                double tol) {
  FdeltaPair pair{DeltaDistribution::numerical_convolution(),
                  DeltaDistribution::monte_carlo(mc_draws, seed)};
  double worst = 0.0;
  for (double c = -20.0; c <= 20.0; c += 0.05)
    worst = std::max(worst,
                     std::abs(pair.convolution.cdf(c) - pair.mc.cdf(c)));
  if (worst > tol)
    throw std::runtime_error("F_Delta methods disagree: sup gap " +
                             std::to_string(worst));
  return pair;
}

}  // namespace netform
