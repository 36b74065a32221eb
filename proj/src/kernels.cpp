#include "swe/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace swe::kern {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
         avx2::ops.matmul != nullptr;
#else
  return false;
#endif
}

namespace {

const Ops* select() {
  const char* force = std::getenv("SWE_KERNELS");
  if (force && std::strcmp(force, "scalar") == 0) return &scalar::ops;
#if defined(__x86_64__) || defined(_M_X64)
  if (force && std::strcmp(force, "avx2") == 0 && avx2_available())
    return &avx2::ops;
  if (!force && avx2_available()) return &avx2::ops;
#endif
  return &scalar::ops;
}

}  // namespace

const Ops& ops() {
  static const Ops* selected = select();
  return *selected;
}

const char* active_name() {
#if defined(__x86_64__) || defined(_M_X64)
  if (&ops() == &avx2::ops) return "avx2";
#endif
  return "scalar";
}

}  // namespace swe::kern
