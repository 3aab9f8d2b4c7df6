#include <bit>
#include <cmath>

#include "netform/kernels.hpp"

namespace netform::kernels {
namespace {

void axpy_eval_scalar(const double* a, const double* b, double g, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + g * b[i];
}

std::size_t count_leq_scalar(const double* v, std::size_t n, double c) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) k += (v[i] <= c) ? 1 : 0;
  return k;
}

std::uint64_t and_popcount_scalar(const std::uint64_t* a,
                                  const std::uint64_t* b, std::size_t nwords) {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < nwords; ++i) k += std::popcount(a[i] & b[i]);
  return k;
}

inline double lam(double x) {
  if (x > 700.0) x = 700.0;
  if (x < -700.0) x = -700.0;
  return 1.0 / (1.0 + std::exp(-x));
}

void logistic_cdf_scalar(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = lam(x[i]);
}

PairMean fe_tetrad_mean_scalar(const double* ai, const double* aj,
                               const double* ah, const double* ak,
                               std::size_t n, double d0, double d1, double d2,
                               double d3) {
  double sp = 0.0, sf = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double l0 = lam(d0 + ai[m] + aj[m]);
    const double l1 = lam(d1 + ah[m] + ak[m]);
    const double l2 = lam(d2 + ai[m] + ak[m]);
    const double l3 = lam(d3 + aj[m] + ah[m]);
    sp += l0 * l1 * (1.0 - l2) * (1.0 - l3);
    sf += (1.0 - l0) * (1.0 - l1) * l2 * l3;
  }
  const double inv = n ? 1.0 / static_cast<double>(n) : 0.0;
  return {sp * inv, sf * inv};
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{axpy_eval_scalar, count_leq_scalar,
                         and_popcount_scalar, logistic_cdf_scalar,
                         fe_tetrad_mean_scalar};
  return table;
}

}  // namespace netform::kernels
