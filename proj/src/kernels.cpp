#include "salmap/kernels.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace salmap::kernels {

#ifdef SALMAP_WITH_AVX2
namespace detail {
const KernelTable* avx2_impl();
}
#endif

const KernelTable* avx2_table() {
#ifdef SALMAP_WITH_AVX2
  if (__builtin_cpu_supports("avx2")) return detail::avx2_impl();
#endif
  return nullptr;
}

namespace {

const KernelTable& choose() {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("SALMAP_ISA")) {
    const std::string want(env);
    if (want == "scalar") return scalar_table();
    if (want == "avx2") {
      if (best) return *best;
      std::fprintf(stderr, "salmap: SALMAP_ISA=avx2 but AVX2 is unavailable; using scalar kernels\n");
      return scalar_table();
    }
    if (want != "auto" && !want.empty())
      std::fprintf(stderr, "salmap: unknown SALMAP_ISA value '%s'; selecting automatically\n",
                   env);
  }
  return best ? *best : scalar_table();
}

}  // namespace

const KernelTable& active_table() {
  static const KernelTable& t = choose();
  return t;
}

std::vector<const KernelTable*> supported_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const KernelTable* t = avx2_table()) tables.push_back(t);
  return tables;
}

}  // namespace salmap::kernels
