#include "fixture.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "salmap/image_io.hpp"
#include "salmap/rng.hpp"

namespace testsupport {
namespace {

using namespace salmap;

struct Scene {
  RgbImage img;
  LabelMap labels;
};

// Class body plus a one-pixel VOID outline, clipped to the image.
void stamp_labels(LabelMap& labels, int x0, int y0, int w, int h, std::uint8_t cls) {
  for (int y = y0 - 1; y < y0 + h + 1; ++y) {
    for (int x = x0 - 1; x < x0 + w + 1; ++x) {
      if (x < 0 || y < 0 || x >= labels.width || y >= labels.height) continue;
      const bool body = x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
      labels.at(x, y) = body ? cls : kVoidLabel;
    }
  }
}

void stamp_pixels(RgbImage& img, int x0, int y0, int w, int h, Rgb8 base) {
  auto shade = [](std::uint8_t v, int d) {
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + d, 0, 255));
  };
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
      const int d = ((x / 4 + y / 4) % 2) ? 30 : -30;  // keep local contrast high
      img.at(x, y) = {shade(base.r, d), shade(base.g, d), shade(base.b, d)};
    }
  }
}

Scene make_scene(Rng& rng, int W, int H) {
  Scene s{RgbImage(W, H), LabelMap(W, H, 0)};
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::uint8_t g = ((x / 8 + y / 8) % 2) ? 150 : 110;
      s.img.at(x, y) = {g, g, g};
    }
  }
  if (rng.uniform() < 0.10) return s;  // background only

  const int cls = rng.int_in(1, 20);
  const int w = static_cast<int>(W * rng.uniform(0.50, 0.75));
  const int h = static_cast<int>(H * rng.uniform(0.50, 0.75));
  const int x0 = rng.int_in(0, W - w);
  const int y0 = rng.int_in(0, H - h);
  stamp_labels(s.labels, x0, y0, w, h, static_cast<std::uint8_t>(cls));
  stamp_pixels(s.img, x0, y0, w, h, voc_palette()[cls]);

  if (rng.uniform() < 0.5) {
    // Secondary object: at most ~36% of the dominant rectangle's area, so
    // the dominant class stays dominant even under full overlap.
    int cls2 = rng.int_in(1, 20);
    while (cls2 == cls) cls2 = rng.int_in(1, 20);
    const int w2 = std::max(2, static_cast<int>(w * rng.uniform(0.30, 0.60)));
    const int h2 = std::max(2, static_cast<int>(h * rng.uniform(0.30, 0.60)));
    const int x1 = rng.int_in(0, W - w2);
    const int y1 = rng.int_in(0, H - h2);
    stamp_labels(s.labels, x1, y1, w2, h2, static_cast<std::uint8_t>(cls2));
    stamp_pixels(s.img, x1, y1, w2, h2, voc_palette()[cls2]);
  }
  return s;
}

}  // namespace

VocFixture::VocFixture(std::string root, int width, int height)
    : root_(std::move(root)), width_(width), height_(height) {
  namespace fs = std::filesystem;
  fs::create_directories(root_ + "/JPEGImages");
  fs::create_directories(root_ + "/SegmentationClass");
  fs::create_directories(root_ + "/ImageSets/Segmentation");
}

std::vector<std::string> VocFixture::add_images(const std::string& prefix, int count,
                                                std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(count);
  salmap::Rng rng(seed);
  char buf[64];
  for (int i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%s_%06d", prefix.c_str(), i + 1);
    const Scene s = make_scene(rng, width_, height_);
    salmap::write_rgb_jpeg(root_ + "/JPEGImages/" + buf + ".jpg", s.img, 90);
    salmap::write_indexed_png(root_ + "/SegmentationClass/" + buf + ".png", s.labels);
    ids.emplace_back(buf);
  }
  return ids;
}

void VocFixture::write_split(const std::string& split, const std::vector<std::string>& ids) const {
  std::ofstream f(root_ + "/ImageSets/Segmentation/" + split + ".txt");
  if (!f) throw std::runtime_error("cannot write split file");
  for (const std::string& id : ids) f << id << "\n";
}

}  // namespace testsupport
