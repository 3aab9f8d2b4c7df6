#pragma once
// Data-parallel inner loops used by the scan and integration machinery.
// Scalar reference implementations and AVX2 variants; the active backend is
// selected once at startup (cpuid, overridable via NETFORM_SIMD=scalar|avx2).
//
// axpy_eval and and_popcount are bit-identical across backends (mul+add, no
// FMA contraction). Transcendental kernels agree to ~1e-14 relative.

#include <cstddef>
#include <cstdint>

namespace netform::kernels {

enum class Backend { scalar, avx2 };

Backend active();
const char* backend_name();

struct PairMean {
  double pattern = 0.0;
  double flipped = 0.0;
};

struct Ops {
  // out[i] = a[i] + g * b[i]
  void (*axpy_eval)(const double* a, const double* b, double g, double* out,
                    std::size_t n);
  // #{ i : v[i] <= c }
  std::size_t (*count_leq)(const double* v, std::size_t n, double c);
  // popcount(a & b) over nwords 64-bit words
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t nwords);
  // out[i] = 1 / (1 + exp(-x[i]))
  void (*logistic_cdf)(const double* x, double* out, std::size_t n);
  // Mean over draws m of
  //   pattern: L(d0+ai+aj) L(d1+ah+ak) (1-L(d2+ai+ak)) (1-L(d3+aj+ah))
  //   flipped: complementary factors.
  // ai..ak are per-draw additive heterogeneity for the four agents.
  PairMean (*fe_tetrad_mean)(const double* ai, const double* aj,
                             const double* ah, const double* ak, std::size_t n,
                             double d0, double d1, double d2, double d3);
};

const Ops& ops();

// Reference (scalar) table, exposed for equivalence tests.
const Ops& scalar_ops();
#ifdef NETFORM_HAVE_AVX2_TU
const Ops& avx2_ops();
bool avx2_supported();
#endif

}  // namespace netform::kernels
