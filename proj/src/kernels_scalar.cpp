#include "salmap/kernels.hpp"

namespace salmap::kernels {
namespace {

void box_mean_scalar(const double* padded, int padded_w, int out_w, int out_h, int k, double* out) {
  const double inv = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sum = 0.0;
      const double* win = padded + static_cast<std::size_t>(y) * padded_w + x;
      for (int wy = 0; wy < k; ++wy) {
        const double* row = win + static_cast<std::size_t>(wy) * padded_w;
        for (int wx = 0; wx < k; ++wx) sum += row[wx];
      }
      out[static_cast<std::size_t>(y) * out_w + x] = sum * inv;
    }
  }
}

void window_variance_scalar(const double* padded, int padded_w, int out_w, int out_h, int k,
                            double* out) {
  const double inv = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const double* win = padded + static_cast<std::size_t>(y) * padded_w + x;
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
      out[static_cast<std::size_t>(y) * out_w + x] = acc * inv;
    }
  }
}

void blend_scalar(const double* a, const double* b, std::size_t n, double w1, double w2,
                  double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (w1 * a[i]) + (w2 * b[i]);
}

void multiply_scalar(const double* a, const double* b, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void center_weight_scalar(const double* in, int w, int h, const double* col_f, const double* row_f,
                          double* out) {
  for (int y = 0; y < h; ++y) {
    const double rf = row_f[y];
    const double* src = in + static_cast<std::size_t>(y) * w;
    double* dst = out + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) dst[x] = src[x] * (2.0 + rf * col_f[x]);
  }
}

void min_max_scalar(const double* v, std::size_t n, double* mn, double* mx) {
  double lo = v[0];
  double hi = v[0];
  for (std::size_t i = 1; i < n; ++i) {
    lo = v[i] < lo ? v[i] : lo;
    hi = v[i] > hi ? v[i] : hi;
  }
  *mn = lo;
  *mx = hi;
}

void affine_rescale_scalar(const double* v, std::size_t n, double lo, double range, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (v[i] - lo) / range;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{
      "scalar",          box_mean_scalar,      window_variance_scalar, blend_scalar,
      multiply_scalar,   center_weight_scalar, min_max_scalar,         affine_rescale_scalar,
  };
  return t;
}

}  // namespace salmap::kernels
