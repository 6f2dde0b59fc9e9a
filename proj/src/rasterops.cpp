#include "salmap/rasterops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "salmap/kernels.hpp"

namespace salmap {

WindowOffsets window_offsets(int k) {
  if (k < 1) throw Error("window width must be at least 1");
  return {(k + 1) / 2 - 1, k / 2};
}

PaddedPlane pad_replicate(const double* src, int w, int h, int before, int after) {
  PaddedPlane p;
  p.width = w + before + after;
  p.height = h + before + after;
  p.data.resize(static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height));
  for (int py = 0; py < p.height; ++py) {
    const int sy = std::clamp(py - before, 0, h - 1);
    const double* srow = src + static_cast<std::size_t>(sy) * w;
    double* drow = p.data.data() + static_cast<std::size_t>(py) * p.width;
    for (int px = 0; px < before; ++px) drow[px] = srow[0];
    std::memcpy(drow + before, srow, sizeof(double) * static_cast<std::size_t>(w));
    for (int px = 0; px < after; ++px) drow[before + w + px] = srow[w - 1];
  }
  return p;
}

SaliencyMap normalize(const SaliencyMap& m) {
  for (double v : m.data)
    if (!std::isfinite(v)) throw NonFiniteValue("normalize: map contains a non-finite value");
  const auto& k = kernels::active_table();
  double lo = 0.0, hi = 0.0;
  k.min_max(m.data.data(), m.size(), &lo, &hi);
  SaliencyMap out(m.width, m.height);
  if (hi == lo) return out;  // constant map -> all zeros
  k.affine_rescale(m.data.data(), m.size(), lo, hi - lo, out.data.data());
  return out;
}

SaliencyMap mean_filter(const SaliencyMap& m, int k) {
  const WindowOffsets off = window_offsets(k);
  const PaddedPlane p = pad_replicate(m.data.data(), m.width, m.height, off.before, off.after);
  SaliencyMap out(m.width, m.height);
  kernels::active_table().box_mean(p.data.data(), p.width, m.width, m.height, k, out.data.data());
  return out;
}

Plane<std::uint8_t> quantize_to_gray(const SaliencyMap& m) {
  Plane<std::uint8_t> out(m.width, m.height);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const long q = std::lround(255.0 * m.data[i]);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
  }
  return out;
}

}  // namespace salmap
