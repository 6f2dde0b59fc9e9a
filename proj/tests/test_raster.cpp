#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "salmap/rasterops.hpp"
#include "salmap/rng.hpp"

using namespace salmap;

namespace {

SaliencyMap random_map(int w, int h, Rng& rng, double lo = 0.0, double hi = 1.0) {
  SaliencyMap m(w, h);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

// Clamped-index box mean, straight from the definition.
SaliencyMap naive_mean(const SaliencyMap& m, int k) {
  const WindowOffsets off = window_offsets(k);
  SaliencyMap out(m.width, m.height);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      double sum = 0.0;
      for (int wy = -off.before; wy <= off.after; ++wy) {
        for (int wx = -off.before; wx <= off.after; ++wx) {
          const int sy = std::clamp(y + wy, 0, m.height - 1);
          const int sx = std::clamp(x + wx, 0, m.width - 1);
          sum += m.at(sx, sy);
        }
      }
      out.at(x, y) = sum / (static_cast<double>(k) * k);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("window_offsets splits even widths with the extra pixel after") {
  CHECK(window_offsets(1).before == 0);
  CHECK(window_offsets(1).after == 0);
  CHECK(window_offsets(2).before == 0);
  CHECK(window_offsets(2).after == 1);
  CHECK(window_offsets(3).before == 1);
  CHECK(window_offsets(3).after == 1);
  CHECK(window_offsets(16).before == 7);
  CHECK(window_offsets(16).after == 8);
  CHECK(window_offsets(20).before == 9);
  CHECK(window_offsets(20).after == 10);
  CHECK_THROWS_AS(window_offsets(0), Error);
}

TEST_CASE("pad_replicate copies edges outward") {
  // 2x2 source:  1 2
  //              3 4
  const double src[] = {1, 2, 3, 4};
  const PaddedPlane p = pad_replicate(src, 2, 2, 1, 2);
  REQUIRE(p.width == 5);
  REQUIRE(p.height == 5);
  const double expect[] = {
      1, 1, 2, 2, 2,  //
      1, 1, 2, 2, 2,  //
      3, 3, 4, 4, 4,  //
      3, 3, 4, 4, 4,  //
      3, 3, 4, 4, 4,  //
  };
  for (int i = 0; i < 25; ++i) CHECK(p.data[i] == expect[i]);
}

TEST_CASE("normalize rescales to [0,1] and collapses constants to zero") {
  SaliencyMap m(3, 1);
  m.data = {1.0, 2.0, 3.0};
  const SaliencyMap n = normalize(m);
  CHECK(n.data[0] == 0.0);
  CHECK(n.data[1] == 0.5);
  CHECK(n.data[2] == 1.0);

  SaliencyMap c(4, 4, 7.25);
  const SaliencyMap nc = normalize(c);
  for (const double v : nc.data) CHECK(v == 0.0);
}

TEST_CASE("normalize rejects non-finite values") {
  SaliencyMap m(2, 2, 0.5);
  m.data[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(normalize(m), NonFiniteValue);
  m.data[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(normalize(m), NonFiniteValue);
}

TEST_CASE("normalize is idempotent bitwise") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const SaliencyMap m = random_map(9, 7, rng, -3.0, 5.0);
    const SaliencyMap once = normalize(m);
    const SaliencyMap twice = normalize(once);
    CHECK(once.data == twice.data);
    // endpoints are hit exactly
    CHECK(*std::min_element(once.data.begin(), once.data.end()) == 0.0);
    CHECK(*std::max_element(once.data.begin(), once.data.end()) == 1.0);
  }
}

TEST_CASE("mean_filter width 1 is the identity") {
  Rng rng(42);
  const SaliencyMap m = random_map(6, 5, rng);
  const SaliencyMap f = mean_filter(m, 1);
  CHECK(f.data == m.data);
}

TEST_CASE("mean_filter spreads an impulse into equal ninths") {
  SaliencyMap m(3, 3, 0.0);
  m.at(1, 1) = 1.0;
  const SaliencyMap f = mean_filter(m, 3);
  // Every 3x3 window over a 3x3 map contains the center exactly once, even
  // with edge replication.
  for (const double v : f.data) CHECK(std::abs(v - 1.0 / 9.0) <= 1e-15);
}

TEST_CASE("mean_filter matches the clamped-index definition") {
  Rng rng(43);
  for (const int k : {2, 3, 4, 7, 20}) {
    for (const auto& [w, h] : {std::pair{8, 6}, std::pair{5, 5}, std::pair{1, 9}}) {
      const SaliencyMap m = random_map(w, h, rng);
      const SaliencyMap got = mean_filter(m, k);
      const SaliencyMap want = naive_mean(m, k);
      for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(got.data[i] - want.data[i]) <= 1e-12);
    }
  }
}

TEST_CASE("mean_filter keeps values inside the input range") {
  Rng rng(44);
  const SaliencyMap m = random_map(11, 8, rng, -2.0, 2.0);
  const double lo = *std::min_element(m.data.begin(), m.data.end());
  const double hi = *std::max_element(m.data.begin(), m.data.end());
  for (const int k : {2, 5, 13}) {
    const SaliencyMap f = mean_filter(m, k);
    for (const double v : f.data) {
      CHECK(v >= lo - 1e-12);
      CHECK(v <= hi + 1e-12);
    }
  }
}

TEST_CASE("mean_filter of a constant map stays at that constant") {
  const SaliencyMap m(7, 4, 0.37);
  const SaliencyMap f = mean_filter(m, 20);
  for (const double v : f.data) CHECK(std::abs(v - 0.37) <= 1e-12);
}

TEST_CASE("quantize_to_gray rounds half away from zero and clamps") {
  SaliencyMap m(6, 1);
  m.data = {0.0, 1.0, 0.5, 127.5 / 255.0, -0.2, 1.3};
  const auto q = quantize_to_gray(m);
  CHECK(q.data[0] == 0);
  CHECK(q.data[1] == 255);
  CHECK(q.data[2] == 128);  // 127.5 rounds away from zero
  CHECK(q.data[3] == 128);
  CHECK(q.data[4] == 0);
  CHECK(q.data[5] == 255);
}
