#pragma once

#include <array>
#include <string>

#include "salmap/raster.hpp"

namespace salmap {

// Decodes a PNG or JPEG (sniffed by magic bytes) to 8-bit RGB. Palette and
// grayscale inputs are expanded; alpha is dropped.
RgbImage load_rgb_image(const std::string& path);

// 8-bit grayscale PNG.
void write_gray_png(const std::string& path, const Plane<std::uint8_t>& img);

void write_rgb_png(const std::string& path, const RgbImage& img);
void write_rgb_jpeg(const std::string& path, const RgbImage& img, int quality = 90);

// Raw palette indices of an indexed PNG (no palette expansion). Throws
// NotPaletteIndexed for any other color type.
Plane<std::uint8_t> read_png_indices(const std::string& path);

// Indexed PNG carrying the standard VOC colormap palette.
void write_indexed_png(const std::string& path, const Plane<std::uint8_t>& indices);

// 256-entry palette from the VOC colormap bit-shuffle.
const std::array<Rgb8, 256>& voc_palette();

}  // namespace salmap
