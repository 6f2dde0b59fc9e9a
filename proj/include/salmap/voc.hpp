#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salmap/context.hpp"
#include "salmap/raster.hpp"

namespace salmap {

struct VocEntry {
  std::string id;
  std::string image_path;
  std::string label_path;
};

struct VocCorpus {
  std::string root;
  std::string split;
  std::vector<VocEntry> entries;
  // Nonempty when the split size differs from the usual segmentation-set
  // sizes; informational, never fatal.
  std::string count_warning;
};

// Usual sizes of the standard segmentation splits (train 1464, val 1449,
// trainval 2913); nullopt for unknown split names.
std::optional<std::size_t> expected_split_size(const std::string& split);

// Reads ImageSets/Segmentation/<split>.txt under `root` and verifies each id
// resolves to JPEGImages/<id>.jpg and SegmentationClass/<id>.png. Never
// touches pixel data.
VocCorpus load_corpus(const std::string& root, const std::string& split);

// Palette-indexed PNG -> LabelMap; any palette index outside 0..20 and 255
// is rejected.
LabelMap decode_label_png(const std::string& path);

struct ContextDataset {
  std::vector<AreaFeatures> features;
  std::vector<int> labels;  // Context as int, parallel to features
  std::array<std::size_t, kContextCount> counts{};
  std::string split;
};

// One (features, context) pair per corpus entry, in entry order; each label
// file is decoded exactly once. Errors are rethrown with the offending id.
ContextDataset build_context_dataset(const VocCorpus& corpus, const ContextMapping& mapping);

}  // namespace salmap
