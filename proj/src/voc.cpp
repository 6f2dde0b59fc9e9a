#include "salmap/voc.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "salmap/image_io.hpp"

namespace salmap {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::optional<std::size_t> expected_split_size(const std::string& split) {
  if (split == "train") return 1464;
  if (split == "val") return 1449;
  if (split == "trainval") return 2913;
  return std::nullopt;
}

VocCorpus load_corpus(const std::string& root, const std::string& split) {
  namespace fs = std::filesystem;
  const std::string list_path = root + "/ImageSets/Segmentation/" + split + ".txt";
  std::ifstream list(list_path);
  if (!list) throw MissingSplitFile("no split file: " + list_path);

  VocCorpus corpus;
  corpus.root = root;
  corpus.split = split;
  std::string line;
  while (std::getline(list, line)) {
    const std::string id = trim(line);
    if (id.empty()) continue;
    VocEntry e;
    e.id = id;
    e.image_path = root + "/JPEGImages/" + id + ".jpg";
    e.label_path = root + "/SegmentationClass/" + id + ".png";
    if (!fs::exists(e.image_path))
      throw MissingImage("no image for id '" + id + "': " + e.image_path);
    if (!fs::exists(e.label_path))
      throw MissingLabel("no label for id '" + id + "': " + e.label_path);
    corpus.entries.push_back(std::move(e));
  }

  if (const auto expected = expected_split_size(split)) {
    if (corpus.entries.size() != *expected)
      corpus.count_warning = "split '" + split + "': " + std::to_string(corpus.entries.size()) +
                             " entries (expected " + std::to_string(*expected) + ")";
  }
  return corpus;
}

LabelMap decode_label_png(const std::string& path) {
  LabelMap labels = read_png_indices(path);
  for (const std::uint8_t v : labels.data)
    if (v >= kClassCount && v != kVoidLabel)
      throw UnsupportedLabelIndex("palette index " + std::to_string(v) + " outside 0..20 in " +
                                  path);
  return labels;
}

ContextDataset build_context_dataset(const VocCorpus& corpus, const ContextMapping& mapping) {
  ContextDataset ds;
  ds.split = corpus.split;
  ds.features.reserve(corpus.entries.size());
  ds.labels.reserve(corpus.entries.size());
  for (const VocEntry& e : corpus.entries) {
    try {
      const LabelMap labels = decode_label_png(e.label_path);
      ds.features.push_back(extract_area_features(labels));
      const Context ctx = derive_context_label(labels, mapping);
      ds.labels.push_back(static_cast<int>(ctx));
      ++ds.counts[static_cast<int>(ctx)];
    } catch (const UnsupportedLabelIndex& ex) {
      throw UnsupportedLabelIndex(e.id + ": " + ex.what());
    } catch (const NotPaletteIndexed& ex) {
      throw NotPaletteIndexed(e.id + ": " + ex.what());
    } catch (const EmptyLabelMap& ex) {
      throw EmptyLabelMap(e.id + ": " + ex.what());
    } catch (const IoError& ex) {
      throw IoError(e.id + ": " + ex.what());
    }
  }
  return ds;
}

}  // namespace salmap
