#pragma once
// Distribution of the tetrad shock contrast eps_ij + eps_hk - eps_ik - eps_jh
// under iid Logistic(0,1) shocks. Two independent constructions: numerical
// self-convolution of the logistic-difference density, and seeded Monte Carlo.

#include <cstdint>
#include <vector>

namespace netform {

enum class FdeltaMethod { NumericalConvolution, MonteCarlo };

class DeltaDistribution {
 public:
  // Convolution route. Grid step is halved until the CDF moves < tol.
  static DeltaDistribution numerical_convolution(double tol = 1e-7);
  // Monte Carlo route: sorted draws of the contrast.
  static DeltaDistribution monte_carlo(std::size_t draws = 10'000'000,
                                       std::uint64_t seed = 1);

  double cdf(double c) const;
  FdeltaMethod method() const { return method_; }

  // Smallest c with cdf(c) >= p (grid-resolution accurate).
  double quantile(double p) const;

  // Density of the difference of two iid Logistic(0,1) draws.
  static double difference_density(double x);

 private:
  FdeltaMethod method_ = FdeltaMethod::NumericalConvolution;
  // convolution: grid + cdf values; monte carlo: sorted samples
  std::vector<double> grid_;
  std::vector<double> cdf_;
  std::vector<double> samples_;
};

// Builds both, raises if they disagree beyond tol in sup norm over
// c in [-20, 20].
struct FdeltaPair {
  DeltaDistribution convolution;
  DeltaDistribution mc;
};
FdeltaPair build_fdelta_checked(std::size_t mc_draws = 10'000'000,
                                std::uint64_t seed = 1, double tol = 1e-3);

}  // namespace netform
