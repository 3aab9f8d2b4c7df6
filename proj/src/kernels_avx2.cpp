// AVX2 variants. Compiled with -mavx2 only (no FMA), so mul+add round exactly
// like the scalar reference and axpy_eval stays bit-identical across backends.
#include <immintrin.h>

#include <bit>
#include <cmath>

#include "netform/kernels.hpp"

namespace netform::kernels {
namespace {

// exp(x) via Cody-Waite range reduction and a degree-13 Taylor polynomial.
// Inputs are clamped to [-700, 700]; relative error ~1e-16 on that range.
inline __m256d exp256(__m256d x) {
  const __m256d hi = _mm256_set1_pd(700.0);
  const __m256d lo = _mm256_set1_pd(-700.0);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

  __m256d nf = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(nf, ln2_hi));
  r = _mm256_sub_pd(r, _mm256_mul_pd(nf, ln2_lo));

  // Horner over 1/k!, k = 13..0
  const double inv_fact[14] = {
      1.0,
      1.0,
      1.0 / 2,
      1.0 / 6,
      1.0 / 24,
      1.0 / 120,
      1.0 / 720,
      1.0 / 5040,
      1.0 / 40320,
      1.0 / 362880,
      1.0 / 3628800,
      1.0 / 39916800,
      1.0 / 479001600,
      1.0 / 6227020800.0,
  };
  __m256d p = _mm256_set1_pd(inv_fact[13]);
  for (int k = 12; k >= 0; --k)
    p = _mm256_add_pd(_mm256_mul_pd(p, r), _mm256_set1_pd(inv_fact[k]));

  // 2^n from the double-to-int magic-add trick: mantissa = 2^51 + n.
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52
  __m256i bits = _mm256_castpd_si256(_mm256_add_pd(nf, magic));
  bits = _mm256_and_si256(bits, _mm256_set1_epi64x(0xFFFFFFFFFFFFFLL));
  bits = _mm256_sub_epi64(bits, _mm256_set1_epi64x(1LL << 51));
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  __m256d pow2 = _mm256_castsi256_pd(_mm256_slli_epi64(bits, 52));
  return _mm256_mul_pd(p, pow2);
}

inline __m256d lam256(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d e = exp256(_mm256_sub_pd(_mm256_setzero_pd(), x));
  return _mm256_div_pd(one, _mm256_add_pd(one, e));
}

inline double lam1(double x) {
  if (x > 700.0) x = 700.0;
  if (x < -700.0) x = -700.0;
  return 1.0 / (1.0 + std::exp(-x));
}

void axpy_eval_avx2(const double* a, const double* b, double g, double* out,
                    std::size_t n) {
  const __m256d vg = _mm256_set1_pd(g);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(va, _mm256_mul_pd(vg, vb)));
  }
  for (; i < n; ++i) out[i] = a[i] + g * b[i];
}

std::size_t count_leq_avx2(const double* v, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t k = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(v + i);
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(x, vc, _CMP_LE_OQ));
    k += std::popcount(static_cast<unsigned>(mask));
  }
  for (; i < n; ++i) k += (v[i] <= c) ? 1 : 0;
  return k;
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nwords) {
  std::uint64_t k = 0;
  std::size_t i = 0;
  alignas(32) std::uint64_t tmp[4];
  for (; i + 4 <= nwords; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_store_si256(reinterpret_cast<__m256i*>(tmp),
                       _mm256_and_si256(va, vb));
    k += std::popcount(tmp[0]) + std::popcount(tmp[1]) +
         std::popcount(tmp[2]) + std::popcount(tmp[3]);
  }
  for (; i < nwords; ++i) k += std::popcount(a[i] & b[i]);
  return k;
}

void logistic_cdf_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, lam256(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = lam1(x[i]);
}

PairMean fe_tetrad_mean_avx2(const double* ai, const double* aj,
                             const double* ah, const double* ak, std::size_t n,
                             double d0, double d1, double d2, double d3) {
  const __m256d v0 = _mm256_set1_pd(d0), v1 = _mm256_set1_pd(d1);
  const __m256d v2 = _mm256_set1_pd(d2), v3 = _mm256_set1_pd(d3);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d accp = _mm256_setzero_pd(), accf = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xi = _mm256_loadu_pd(ai + i);
    __m256d xj = _mm256_loadu_pd(aj + i);
    __m256d xh = _mm256_loadu_pd(ah + i);
    __m256d xk = _mm256_loadu_pd(ak + i);
    __m256d l0 = lam256(_mm256_add_pd(v0, _mm256_add_pd(xi, xj)));
    __m256d l1 = lam256(_mm256_add_pd(v1, _mm256_add_pd(xh, xk)));
    __m256d l2 = lam256(_mm256_add_pd(v2, _mm256_add_pd(xi, xk)));
    __m256d l3 = lam256(_mm256_add_pd(v3, _mm256_add_pd(xj, xh)));
    __m256d c2 = _mm256_sub_pd(one, l2);
    __m256d c3 = _mm256_sub_pd(one, l3);
    accp = _mm256_add_pd(
        accp, _mm256_mul_pd(_mm256_mul_pd(l0, l1), _mm256_mul_pd(c2, c3)));
    accf = _mm256_add_pd(
        accf, _mm256_mul_pd(_mm256_mul_pd(_mm256_sub_pd(one, l0),
                                          _mm256_sub_pd(one, l1)),
                            _mm256_mul_pd(l2, l3)));
  }
  alignas(32) double bp[4], bf[4];
  _mm256_store_pd(bp, accp);
  _mm256_store_pd(bf, accf);
  double sp = bp[0] + bp[1] + bp[2] + bp[3];
  double sf = bf[0] + bf[1] + bf[2] + bf[3];
  for (; i < n; ++i) {
    const double l0 = lam1(d0 + ai[i] + aj[i]);
    const double l1 = lam1(d1 + ah[i] + ak[i]);
    const double l2 = lam1(d2 + ai[i] + ak[i]);
    const double l3 = lam1(d3 + aj[i] + ah[i]);
    sp += l0 * l1 * (1.0 - l2) * (1.0 - l3);
    sf += (1.0 - l0) * (1.0 - l1) * l2 * l3;
  }
  const double inv = n ? 1.0 / static_cast<double>(n) : 0.0;
  return {sp * inv, sf * inv};
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{axpy_eval_avx2, count_leq_avx2, and_popcount_avx2,
                         logistic_cdf_avx2, fe_tetrad_mean_avx2};
  return table;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

}  // namespace netform::kernels
