// AVX2 variants of the kernel table. Each lane performs the same operations
// in the same order as the scalar code, so results are bit-identical: 4-wide
// unaligned loads over consecutive output columns, explicit mul+add (no FMA),
// scalar remainder loops copied from the reference implementation.
#if defined(SALMAP_WITH_AVX2) && defined(__AVX2__)

#include <immintrin.h>

#include "salmap/kernels.hpp"

namespace salmap::kernels::detail {
namespace {

void box_mean_avx2(const double* padded, int padded_w, int out_w, int out_h, int k, double* out) {
  const double inv = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  const __m256d vinv = _mm256_set1_pd(inv);
  for (int y = 0; y < out_h; ++y) {
    const double* win_row = padded + static_cast<std::size_t>(y) * padded_w;
    double* dst = out + static_cast<std::size_t>(y) * out_w;
    int x = 0;
    for (; x + 4 <= out_w; x += 4) {
      __m256d sum = _mm256_setzero_pd();
      const double* win = win_row + x;
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) sum = _mm256_add_pd(sum, _mm256_loadu_pd(row + wx));
      }
      _mm256_storeu_pd(dst + x, _mm256_mul_pd(sum, vinv));
    }
    for (; x < out_w; ++x) {
      double sum = 0.0;
      const double* win = win_row + x;
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) sum += row[wx];
      }
      dst[x] = sum * inv;
    }
  }
}

void window_variance_avx2(const double* padded, int padded_w, int out_w, int out_h, int k,
                          double* out) {
  const double inv = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  const __m256d vinv = _mm256_set1_pd(inv);
  for (int y = 0; y < out_h; ++y) {
    const double* win_row = padded + static_cast<std::size_t>(y) * padded_w;
    double* dst = out + static_cast<std::size_t>(y) * out_w;
    int x = 0;
    for (; x + 4 <= out_w; x += 4) {
      const double* win = win_row + x;
      __m256d sum = _mm256_setzero_pd();
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) sum = _mm256_add_pd(sum, _mm256_loadu_pd(row + wx));
      }
      const __m256d mean = _mm256_mul_pd(sum, vinv);
      __m256d acc = _mm256_setzero_pd();
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) {
          const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(row + wx), mean);
          acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
        }
      }
      _mm256_storeu_pd(dst + x, _mm256_mul_pd(acc, vinv));
    }
    for (; x < out_w; ++x) {
      const double* win = win_row + x;
      double sum = 0.0;
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) sum += row[wx];
      }
      const double mean = sum * inv;
      double acc = 0.0;
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) {
          const double d = row[wx] - mean;
          acc += d * d;
        }
      }
      dst[x] = acc * inv;
    }
  }
}

void blend_avx2(const double* a, const double* b, std::size_t n, double w1, double w2,
                double* out) {
  const __m256d vw1 = _mm256_set1_pd(w1);
  const __m256d vw2 = _mm256_set1_pd(w2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pa = _mm256_mul_pd(vw1, _mm256_loadu_pd(a + i));
    const __m256d pb = _mm256_mul_pd(vw2, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(pa, pb));
  }
  for (; i < n; ++i) out[i] = (w1 * a[i]) + (w2 * b[i]);
}

void multiply_avx2(const double* a, const double* b, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void center_weight_avx2(const double* in, int w, int h, const double* col_f, const double* row_f,
                        double* out) {
  const __m256d two = _mm256_set1_pd(2.0);
  for (int y = 0; y < h; ++y) {
    const double rf = row_f[y];
    const __m256d vrf = _mm256_set1_pd(rf);
    const double* src = in + static_cast<std::size_t>(y) * w;
    double* dst = out + static_cast<std::size_t>(y) * w;
    int x = 0;
    for (; x + 4 <= w; x += 4) {
      const __m256d f = _mm256_add_pd(two, _mm256_mul_pd(vrf, _mm256_loadu_pd(col_f + x)));
      _mm256_storeu_pd(dst + x, _mm256_mul_pd(_mm256_loadu_pd(src + x), f));
    }
    for (; x < w; ++x) dst[x] = src[x] * (2.0 + rf * col_f[x]);
  }
}

// Order-independent for finite inputs (min/max never round), so the strided
// reduction matches the sequential scalar scan exactly.
void min_max_avx2(const double* v, std::size_t n, double* mn, double* mx) {
  if (n < 8) {
    double lo = v[0];
    double hi = v[0];
    for (std::size_t i = 1; i < n; ++i) {
      lo = v[i] < lo ? v[i] : lo;
      hi = v[i] > hi ? v[i] : hi;
    }
    *mn = lo;
    *mx = hi;
    return;
  }
  __m256d vlo = _mm256_loadu_pd(v);
  __m256d vhi = vlo;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    vlo = _mm256_min_pd(vlo, x);
    vhi = _mm256_max_pd(vhi, x);
  }
  double tl[4], th[4];
  _mm256_storeu_pd(tl, vlo);
  _mm256_storeu_pd(th, vhi);
  double lo = tl[0];
  double hi = th[0];
  for (int j = 1; j < 4; ++j) {
    lo = tl[j] < lo ? tl[j] : lo;
    hi = th[j] > hi ? th[j] : hi;
  }
  for (; i < n; ++i) {
    lo = v[i] < lo ? v[i] : lo;
    hi = v[i] > hi ? v[i] : hi;
  }
  *mn = lo;
  *mx = hi;
}

void affine_rescale_avx2(const double* v, std::size_t n, double lo, double range, double* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vrange = _mm256_set1_pd(range);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), vlo), vrange));
  for (; i < n; ++i) out[i] = (v[i] - lo) / range;
}

}  // namespace

const KernelTable* avx2_impl() {
  static const KernelTable t{
      "avx2",        box_mean_avx2,      window_variance_avx2, blend_avx2,
      multiply_avx2, center_weight_avx2, min_max_avx2,         affine_rescale_avx2,
  };
  return &t;
}

}  // namespace salmap::kernels::detail

#endif  // SALMAP_WITH_AVX2 && __AVX2__
