#pragma once

#include "salmap/raster.hpp"

namespace salmap {

struct HsvPixel {
  double h = 0.0;  // hue fraction in [0,1)
  double s = 0.0;
  double v = 0.0;
};

// Hexcone RGB -> HSV. Achromatic pixels get h = 0.
HsvPixel rgb_to_hsv_pixel(Rgb8 px);

// Inverse hexcone mapping, quantized back to 8 bits (round to nearest).
Rgb8 hsv_to_rgb_pixel(double h, double s, double v);

HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

}  // namespace salmap
