#include "salmap/context.hpp"

#include <map>

#include "salmap/config.hpp"

namespace salmap {
namespace {

constexpr std::array<std::string_view, kContextCount> kContextNames = {
    "pet", "other_animals", "vehicle", "indoor", "others"};

constexpr std::array<std::string_view, kClassCount> kClassNames = {
    "background", "aeroplane",   "bicycle", "bird",  "boat",        "bottle", "bus",
    "car",        "cat",         "chair",   "cow",   "diningtable", "dog",    "horse",
    "motorbike",  "person",      "pottedplant",      "sheep",       "sofa",   "train",
    "tvmonitor"};

}  // namespace

std::string_view context_name(Context c) { return kContextNames[static_cast<int>(c)]; }

std::optional<Context> parse_context(std::string_view name) {
  for (int i = 0; i < kContextCount; ++i)
    if (kContextNames[i] == name) return static_cast<Context>(i);
  return std::nullopt;
}

const std::array<std::string_view, kClassCount>& class_names() { return kClassNames; }

std::optional<int> class_index(std::string_view name) {
  for (int i = 1; i < kClassCount; ++i)
    if (kClassNames[i] == name) return i;
  return std::nullopt;
}

AreaFeatures extract_area_features(const LabelMap& labels) {
  std::array<std::size_t, kClassCount> counts{};
  std::size_t void_count = 0;
  for (const std::uint8_t v : labels.data) {
    if (v == kVoidLabel) {
      ++void_count;
    } else if (v < kClassCount) {
      ++counts[v];
    } else {
      throw UnsupportedLabelIndex("label value " + std::to_string(v) + " outside 0..20");
    }
  }
  const std::size_t valid = labels.size() - void_count;
  if (valid == 0) throw EmptyLabelMap("label map is entirely VOID");
  AreaFeatures f;
  for (int c = 0; c < kObjectClassCount; ++c)
    f.areas[c] = static_cast<double>(counts[c + 1]) / static_cast<double>(valid);
  return f;
}

ContextMapping default_context_mapping() {
  ContextMapping m;
  auto set = [&m](std::string_view name, Context c) { m.by_class[*class_index(name) - 1] = c; };
  set("cat", Context::Pet);
  set("dog", Context::Pet);
  set("bird", Context::OtherAnimals);
  set("cow", Context::OtherAnimals);
  set("horse", Context::OtherAnimals);
  set("sheep", Context::OtherAnimals);
  set("aeroplane", Context::Vehicle);
  set("bicycle", Context::Vehicle);
  set("boat", Context::Vehicle);
  set("bus", Context::Vehicle);
  set("car", Context::Vehicle);
  set("motorbike", Context::Vehicle);
  set("train", Context::Vehicle);
  set("bottle", Context::Indoor);
  set("chair", Context::Indoor);
  set("diningtable", Context::Indoor);
  set("pottedplant", Context::Indoor);
  set("sofa", Context::Indoor);
  set("tvmonitor", Context::Indoor);
  set("person", Context::Others);
  return m;
}

ContextMapping load_context_mapping(const std::string& path) {
  ContextMapping m;
  std::array<bool, kObjectClassCount> seen{};
  for (const KvEntry& e : parse_kv_file(path)) {
    if (!e.section.empty())
      throw ConfigError(path + ":" + std::to_string(e.line) +
                        ": sections are not allowed in a context mapping");
    const auto cls = class_index(e.key);
    if (!cls)
      throw ConfigError(path + ":" + std::to_string(e.line) + ": unknown class '" + e.key + "'");
    const auto ctx = parse_context(e.value);
    if (!ctx)
      throw ConfigError(path + ":" + std::to_string(e.line) + ": unknown context '" + e.value +
                        "'");
    if (seen[*cls - 1])
      throw ConfigError(path + ":" + std::to_string(e.line) + ": duplicate class '" + e.key + "'");
    seen[*cls - 1] = true;
    m.by_class[*cls - 1] = *ctx;
  }
  for (int c = 0; c < kObjectClassCount; ++c)
    if (!seen[c])
      throw ConfigError(path + ": missing mapping for class '" + std::string(kClassNames[c + 1]) +
                        "'");
  return m;
}

Context derive_context_label(const LabelMap& labels, const ContextMapping& mapping) {
  std::array<std::size_t, kClassCount> counts{};
  std::size_t void_count = 0;
  for (const std::uint8_t v : labels.data) {
    if (v == kVoidLabel) {
      ++void_count;
    } else if (v < kClassCount) {
      ++counts[v];
    } else {
      throw UnsupportedLabelIndex("label value " + std::to_string(v) + " outside 0..20");
    }
  }
  if (void_count == labels.size()) throw EmptyLabelMap("label map is entirely VOID");
  int best = 0;
  std::size_t best_count = 0;
  for (int c = 1; c < kClassCount; ++c) {
    if (counts[c] > best_count) {  // strict: ties keep the lowest class index
      best = c;
      best_count = counts[c];
    }
  }
  if (best == 0) return Context::Others;  // only background pixels
  return mapping.by_class[best - 1];
}

Context classify(const Mlp& model, const LabelMap& labels) {
  const AreaFeatures f = extract_area_features(labels);
  return static_cast<Context>(mlp_predict(model, f.areas.data()));
}

}  // namespace salmap
