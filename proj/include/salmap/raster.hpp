#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "salmap/errors.hpp"

namespace salmap {

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

// Row-major raster; (x, y) addresses column x of row y.
template <typename T>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Plane() = default;

  Plane(int w, int h, T fill = T{}) {
    if (w < 1 || h < 1) throw Error("raster dimensions must be at least 1x1");
    width = w;
    height = h;
    data.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
  }

  std::size_t size() const { return data.size(); }

  std::size_t index(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }

  T& at(int x, int y) { return data[index(x, y)]; }
  const T& at(int x, int y) const { return data[index(x, y)]; }

  friend bool operator==(const Plane&, const Plane&) = default;
};

using SaliencyMap = Plane<double>;
using LabelMap = Plane<std::uint8_t>;
using RgbImage = Plane<Rgb8>;

// VOC label conventions: 0 = background, 1..20 = object classes, 255 = void.
inline constexpr std::uint8_t kVoidLabel = 255;
inline constexpr int kObjectClassCount = 20;
inline constexpr int kClassCount = 21;  // background + object classes

// Per-channel HSV planes; hue is a fraction of the full circle in [0,1).
// Achromatic pixels (s == 0) store h == 0 by convention.
struct HsvImage {
  int width = 0;
  int height = 0;
  std::vector<double> h, s, v;

  HsvImage() = default;

  HsvImage(int w, int ht) {
    if (w < 1 || ht < 1) throw Error("raster dimensions must be at least 1x1");
    width = w;
    height = ht;
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(ht);
    h.assign(n, 0.0);
    s.assign(n, 0.0);
    v.assign(n, 0.0);
  }

  std::size_t size() const { return h.size(); }
};

template <typename A, typename B>
bool same_dims(const A& a, const B& b) {
  return a.width == b.width && a.height == b.height;
}

template <typename A, typename B>
void require_same_dims(const A& a, const B& b, const char* what) {
  if (!same_dims(a, b))
    throw DimensionMismatch(std::string(what) + ": inputs are " + std::to_string(a.width) + "x" +
                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                            std::to_string(b.height));
}

}  // namespace salmap
