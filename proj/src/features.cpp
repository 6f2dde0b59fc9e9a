#include "salmap/features.hpp"

#include <cmath>
#include <numbers>

#include "salmap/kernels.hpp"
#include "salmap/rasterops.hpp"

namespace salmap {

SaliencyMap contrast_energy(const HsvImage& hsv, int block) {
  const WindowOffsets off = window_offsets(block);
  const PaddedPlane p = pad_replicate(hsv.v.data(), hsv.width, hsv.height, off.before, off.after);
  SaliencyMap out(hsv.width, hsv.height);
  kernels::active_table().window_variance(p.data.data(), p.width, hsv.width, hsv.height, block,
                                          out.data.data());
  return out;
}

SaliencyMap contrast_saliency(const HsvImage& hsv, int block) {
  return normalize(contrast_energy(hsv, block));
}

SaliencyMap color_response(const HsvImage& hsv, double p) {
  if (p < 0.0) throw Error("hue exponent must be non-negative");
  SaliencyMap out(hsv.width, hsv.height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (hsv.s[i] == 0.0) continue;  // achromatic -> 0
    const double base = 0.5 * (std::cos(2.0 * std::numbers::pi * hsv.h[i]) + 1.0);
    out.data[i] = std::pow(base, p);
  }
  return out;
}

SaliencyMap color_saliency(const HsvImage& hsv, double p) {
  return normalize(color_response(hsv, p));
}

}  // namespace salmap
