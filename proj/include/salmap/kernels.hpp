#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace salmap::kernels {

// Hot inner loops live behind this table so an ISA-specific variant can be
// swapped in at runtime. Every variant must produce bit-identical results to
// the scalar table: same summation order per output element, no FMA
// contraction, plain IEEE add/mul/div/min/max only.
struct KernelTable {
  const char* name;

  // Mean of each k*k window over a replicate-padded source. `padded` holds
  // (out_h + k - 1) rows of `padded_w` doubles; window (x, y) starts at
  // padded[y * padded_w + x].
  void (*box_mean)(const double* padded, int padded_w, int out_w, int out_h, int k, double* out);

  // Population variance of each k*k window, same layout as box_mean.
  void (*window_variance)(const double* padded, int padded_w, int out_w, int out_h, int k,
                          double* out);

  // out[i] = w1 * a[i] + w2 * b[i]
  void (*blend)(const double* a, const double* b, std::size_t n, double w1, double w2, double* out);

  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, std::size_t n, double* out);

  // out[x + y*w] = in[x + y*w] * (2 + row_f[y] * col_f[x])
  void (*center_weight)(const double* in, int w, int h, const double* col_f, const double* row_f,
                        double* out);

  // Min and max over n values (n >= 1).
  void (*min_max)(const double* v, std::size_t n, double* mn, double* mx);

  // out[i] = (v[i] - lo) / range
  void (*affine_rescale)(const double* v, std::size_t n, double lo, double range, double* out);
};

const KernelTable& scalar_table();

// Null when the build or the host CPU lacks AVX2.
const KernelTable* avx2_table();

// Table chosen at startup: AVX2 when available, overridable via the
// SALMAP_ISA environment variable (scalar | avx2 | auto).
const KernelTable& active_table();

// Every table usable on this host, scalar first. Used by equivalence tests.
std::vector<const KernelTable*> supported_tables();

}  // namespace salmap::kernels
