#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "netform/core.hpp"
#include "netform/kernels.hpp"

using namespace netform;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("scalar logistic sanity") {
  const auto& ops = kernels::scalar_ops();
  double x[3] = {0.0, 2.0, -2.0};
  double out[3];
  ops.logistic_cdf(x, out, 3);
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
  CHECK(out[1] + out[2] == doctest::Approx(1.0).epsilon(1e-14));
}

#ifdef NETFORM_HAVE_AVX2_TU
TEST_CASE("scalar and avx2 backends agree") {
  if (!kernels::avx2_supported()) return;
  const auto& s = kernels::scalar_ops();
  const auto& v = kernels::avx2_ops();
  Rng rng(123);

  SUBCASE("axpy_eval bit-identical") {
    for (std::size_t n : {0u, 1u, 3u, 4u, 17u, 1000u}) {
      auto a = random_vec(rng, n, -50, 50);
      auto b = random_vec(rng, n, -50, 50);
      std::vector<double> o1(n), o2(n);
      s.axpy_eval(a.data(), b.data(), 3.7, o1.data(), n);
      v.axpy_eval(a.data(), b.data(), 3.7, o2.data(), n);
      CHECK(std::memcmp(o1.data(), o2.data(), n * sizeof(double)) == 0);
    }
  }

  SUBCASE("count_leq identical") {
    auto x = random_vec(rng, 777, -5, 5);
    for (double c : {-6.0, -1.0, 0.0, 2.5, 9.0})
      CHECK(s.count_leq(x.data(), x.size(), c) ==
            v.count_leq(x.data(), x.size(), c));
  }

  SUBCASE("and_popcount identical") {
    for (std::size_t w : {1u, 2u, 5u, 16u, 33u}) {
      std::vector<std::uint64_t> a(w), b(w);
      for (std::size_t i = 0; i < w; ++i) {
        a[i] = rng.next_u64();
        b[i] = rng.next_u64();
      }
      CHECK(s.and_popcount(a.data(), b.data(), w) ==
            v.and_popcount(a.data(), b.data(), w));
    }
  }

  SUBCASE("logistic_cdf close") {
    auto x = random_vec(rng, 2000, -700, 700);
    std::vector<double> o1(x.size()), o2(x.size());
    s.logistic_cdf(x.data(), o1.data(), x.size());
    v.logistic_cdf(x.data(), o2.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double denom = std::max(o1[i], 1e-300);
      CHECK(std::abs(o1[i] - o2[i]) / denom < 1e-12);
    }
  }

  SUBCASE("fe_tetrad_mean close") {
    const std::size_t m = 4097;
    auto ai = random_vec(rng, m, -3, 3), aj = random_vec(rng, m, -3, 3);
    auto ah = random_vec(rng, m, -3, 3), ak = random_vec(rng, m, -3, 3);
    const auto r1 = s.fe_tetrad_mean(ai.data(), aj.data(), ah.data(),
                                     ak.data(), m, 0.3, -1.2, 2.0, 0.0);
    const auto r2 = v.fe_tetrad_mean(ai.data(), aj.data(), ah.data(),
                                     ak.data(), m, 0.3, -1.2, 2.0, 0.0);
    CHECK(r1.pattern == doctest::Approx(r2.pattern).epsilon(1e-11));
    CHECK(r1.flipped == doctest::Approx(r2.flipped).epsilon(1e-11));
  }
}
#endif

TEST_CASE("active backend runs") {
  const auto& ops = kernels::ops();
  double a[5] = {1, 2, 3, 4, 5};
  double b[5] = {5, 4, 3, 2, 1};
  double out[5];
  ops.axpy_eval(a, b, 2.0, out, 5);  // {11, 10, 9, 8, 7}
  CHECK(out[0] == 11.0);
  CHECK(ops.count_leq(out, 5, 10.0) == 4);
  CHECK(ops.count_leq(out, 5, 8.5) == 2);
  INFO("backend: ", kernels::backend_name());
}
