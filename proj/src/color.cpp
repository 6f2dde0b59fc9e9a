#include "salmap/color.hpp"

#include <algorithm>
#include <cmath>

namespace salmap {

HsvPixel rgb_to_hsv_pixel(Rgb8 px) {
  const double r = px.r / 255.0;
  const double g = px.g / 255.0;
  const double b = px.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;

  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = (g - b) / delta;
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h /= 6.0;
    if (h < 0.0) h += 1.0;
    if (h >= 1.0) h = 0.0;
  }
  const double s = (mx == 0.0) ? 0.0 : delta / mx;
  return {h, s, mx};
}

Rgb8 hsv_to_rgb_pixel(double h, double s, double v) {
  const double c = v * s;
  const double h6 = h * 6.0;
  const double x = c * (1.0 - std::fabs(std::fmod(h6, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  switch (static_cast<int>(h6) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  auto to8 = [](double u) {
    long q = std::lround(u * 255.0);
    return static_cast<std::uint8_t>(std::clamp(q, 0L, 255L));
  };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  HsvImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const HsvPixel p = rgb_to_hsv_pixel(img.data[i]);
    out.h[i] = p.h;
    out.s[i] = p.s;
    out.v[i] = p.v;
  }
  return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.size(); ++i)
    out.data[i] = hsv_to_rgb_pixel(img.h[i], img.s[i], img.v[i]);
  return out;
}

}  // namespace salmap
