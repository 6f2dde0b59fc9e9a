#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "salmap/mlp.hpp"
#include "salmap/raster.hpp"

namespace salmap {

enum class Context : int {
  Pet = 0,
  OtherAnimals = 1,
  Vehicle = 2,
  Indoor = 3,
  Others = 4,
};

inline constexpr int kContextCount = 5;

// Stable lowercase tokens used in config files, CLI output and JSON.
std::string_view context_name(Context c);
std::optional<Context> parse_context(std::string_view name);

// Class names by label value; index 0 is "background", 1..20 the object
// classes in their canonical order.
const std::array<std::string_view, kClassCount>& class_names();
std::optional<int> class_index(std::string_view name);  // object classes only (1..20)

struct AreaFeatures {
  // Fraction of non-VOID pixels per object class; index 0 = class label 1.
  std::array<double, kObjectClassCount> areas{};
};

// Per-class area fractions over the non-VOID pixels. Throws EmptyLabelMap
// when every pixel is VOID.
AreaFeatures extract_area_features(const LabelMap& labels);

struct ContextMapping {
  // Context per object class; index 0 = class label 1 (aeroplane).
  std::array<Context, kObjectClassCount> by_class{};
};

// cat/dog -> Pet; bird/cow/horse/sheep -> OtherAnimals; aeroplane/bicycle/
// boat/bus/car/motorbike/train -> Vehicle; bottle/chair/diningtable/
// pottedplant/sofa/tvmonitor -> Indoor; person -> Others.
ContextMapping default_context_mapping();

// Text file of `class_name = context_name` lines covering all 20 object
// classes exactly once.
ContextMapping load_context_mapping(const std::string& path);

// Context of the class with the largest pixel area (ties: lowest class
// index); all-background maps fall through to Others. Throws EmptyLabelMap
// when every pixel is VOID.
Context derive_context_label(const LabelMap& labels, const ContextMapping& mapping);

// extract_area_features -> forward -> argmax (ties: lowest index).
Context classify(const Mlp& model, const LabelMap& labels);

}  // namespace salmap
