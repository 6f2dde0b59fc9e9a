#pragma once

#include <cstdint>
#include <vector>

#include "salmap/raster.hpp"

namespace salmap {

// How a width-k window is split around its anchor pixel: `before` pixels on
// the top/left, `after` on the bottom/right, before + 1 + after == k. Even
// widths put the extra pixel after the anchor.
struct WindowOffsets {
  int before = 0;
  int after = 0;
};

WindowOffsets window_offsets(int k);

// Replicate-padded copy of a w*h buffer with `before` extra rows/columns on
// the top/left and `after` on the bottom/right.
struct PaddedPlane {
  int width = 0;
  int height = 0;
  std::vector<double> data;
};

PaddedPlane pad_replicate(const double* src, int w, int h, int before, int after);

// Min-max rescale to [0,1]. A constant map collapses to all zeros. Throws
// NonFiniteValue if any input value is NaN or infinite. Idempotent: applying
// it twice gives bitwise the same map.
SaliencyMap normalize(const SaliencyMap& m);

// k*k box filter with edge replication.
SaliencyMap mean_filter(const SaliencyMap& m, int k);

// Round to 8 bits (half away from zero), clamped to [0,255]. Meant for maps
// already scaled to [0,1].
Plane<std::uint8_t> quantize_to_gray(const SaliencyMap& m);

}  // namespace salmap
