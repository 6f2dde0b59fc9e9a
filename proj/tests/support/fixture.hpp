#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace testsupport {

// Builds VOC-layout directory trees filled with small synthetic scenes:
// checkered gray background, a dominant VOID-outlined object rectangle,
// sometimes a clearly smaller secondary object, sometimes background only.
class VocFixture {
 public:
  explicit VocFixture(std::string root, int width = 48, int height = 36);

  // Paints `count` scenes (JPEG image + indexed label PNG) and returns the
  // generated ids. Deterministic in (prefix, count, seed).
  std::vector<std::string> add_images(const std::string& prefix, int count, std::uint64_t seed);

  void write_split(const std::string& split, const std::vector<std::string>& ids) const;

  const std::string& root() const { return root_; }

 private:
  std::string root_;
  int width_;
  int height_;
};

}  // namespace testsupport
