#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "salmap/context.hpp"
#include "salmap/raster.hpp"

namespace salmap {

struct SaliencyLut {
  std::string name;
  std::array<double, kClassCount> weights{};  // indexed by class label, 0 = background
  double void_weight = 0.0;
};

struct LutBank {
  std::array<SaliencyLut, kContextCount> context_luts;  // indexed by Context
  std::optional<SaliencyLut> user;
};

// Built-in weights: classes belonging to the LUT's context 1.0, person 0.8
// everywhere, other object classes 0.4, background 0.1, VOID 0.0.
LutBank default_lut_bank();

// Sectioned text file: one `[context]` section per context token, optional
// `[user]` section; each section must set all 21 class names plus `void`.
LutBank load_lut_bank(const std::string& path);

// Per-pixel weight lookup; VOID pixels get void_weight.
SaliencyMap apply_lut(const LabelMap& labels, const SaliencyLut& lut);

// The user LUT when the override flag is set (MissingUserLut if absent),
// otherwise the LUT keyed by ctx.
const SaliencyLut& select_lut(const LutBank& bank, Context ctx, bool user_override);

// classify + select + apply; returns the map with the detected context.
std::pair<SaliencyMap, Context> semantic_saliency(const LabelMap& labels, const LutBank& bank,
                                                  const Mlp& model, bool user_override = false);

}  // namespace salmap
