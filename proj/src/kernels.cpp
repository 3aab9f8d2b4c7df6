#include "netform/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace netform::kernels {
namespace {

Backend resolve() {
  const char* env = std::getenv("NETFORM_SIMD");
  if (env) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
#ifdef NETFORM_HAVE_AVX2_TU
    if (std::strcmp(env, "avx2") == 0 && avx2_supported())
      return Backend::avx2;
#endif
  }
#ifdef NETFORM_HAVE_AVX2_TU
  if (avx2_supported()) return Backend::avx2;
#endif
  return Backend::scalar;
}

}  // namespace

Backend active() {
  static const Backend b = resolve();
  return b;
}

const char* backend_name() {
  return active() == Backend::scalar ? "scalar" : "avx2";
}

const Ops& ops() {
#ifdef NETFORM_HAVE_AVX2_TU
  if (active() == Backend::avx2) return avx2_ops();
#endif
  return scalar_ops();
}

}  // namespace netform::kernels
