#pragma once

#include "salmap/raster.hpp"

namespace salmap {

// Raw local contrast: population variance of the V channel over a
// block*block sliding window with edge replication. Not normalized.
SaliencyMap contrast_energy(const HsvImage& hsv, int block);

// Normalized contrast feature map.
SaliencyMap contrast_saliency(const HsvImage& hsv, int block = 16);

// Raw hue preference: ((cos(2*pi*h) + 1) / 2)^p per pixel, forced to 0 for
// achromatic pixels (s == 0) so gray never reads as "red". Not normalized.
SaliencyMap color_response(const HsvImage& hsv, double p);

// Normalized color feature map.
SaliencyMap color_saliency(const HsvImage& hsv, double p = 4.0);

}  // namespace salmap
