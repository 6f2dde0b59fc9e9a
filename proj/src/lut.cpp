#include "salmap/lut.hpp"

#include <string>

#include "salmap/config.hpp"

namespace salmap {

LutBank default_lut_bank() {
  const ContextMapping mapping = default_context_mapping();
  LutBank bank;
  for (int ci = 0; ci < kContextCount; ++ci) {
    const auto ctx = static_cast<Context>(ci);
    SaliencyLut& lut = bank.context_luts[ci];
    lut.name = std::string(context_name(ctx));
    lut.weights[0] = 0.1;  // background
    for (int c = 1; c < kClassCount; ++c)
      lut.weights[c] = (mapping.by_class[c - 1] == ctx) ? 1.0 : 0.4;
    lut.weights[*class_index("person")] = 0.8;  // people draw attention in every context
    lut.void_weight = 0.0;
  }
  return bank;
}

LutBank load_lut_bank(const std::string& path) {
  struct Section {
    SaliencyLut lut;
    std::array<bool, kClassCount> seen{};
    bool void_seen = false;
    bool present = false;
  };
  std::array<Section, kContextCount + 1> sections;  // last slot = user

  auto section_slot = [&](const std::string& name, const KvEntry& e) -> Section& {
    if (name == "user") return sections[kContextCount];
    if (const auto ctx = parse_context(name)) return sections[static_cast<int>(*ctx)];
    throw ConfigError(path + ":" + std::to_string(e.line) + ": unknown LUT section '" + name +
                      "'");
  };

  for (const KvEntry& e : parse_kv_file(path)) {
    if (e.section.empty())
      throw ConfigError(path + ":" + std::to_string(e.line) +
                        ": LUT entries must appear inside a [section]");
    Section& s = section_slot(e.section, e);
    s.present = true;
    s.lut.name = e.section;
    const double w = parse_double(e.value, e);
    if (!(w >= 0.0 && w <= 1.0))
      throw ConfigError(path + ":" + std::to_string(e.line) + ": weight must be in [0,1]");
    if (e.key == "void") {
      if (s.void_seen)
        throw ConfigError(path + ":" + std::to_string(e.line) + ": duplicate key 'void'");
      s.void_seen = true;
      s.lut.void_weight = w;
      continue;
    }
    int cls = -1;
    if (e.key == "background") {
      cls = 0;
    } else if (const auto idx = class_index(e.key)) {
      cls = *idx;
    } else {
      throw ConfigError(path + ":" + std::to_string(e.line) + ": unknown class '" + e.key + "'");
    }
    if (s.seen[cls])
      throw ConfigError(path + ":" + std::to_string(e.line) + ": duplicate key '" + e.key + "'");
    s.seen[cls] = true;
    s.lut.weights[cls] = w;
  }

  auto require_complete = [&](const Section& s, const std::string& name) {
    for (int c = 0; c < kClassCount; ++c)
      if (!s.seen[c])
        throw ConfigError(path + ": section [" + name + "] is missing class '" +
                          std::string(class_names()[c]) + "'");
    if (!s.void_seen)
      throw ConfigError(path + ": section [" + name + "] is missing the 'void' weight");
  };

  LutBank bank;
  for (int ci = 0; ci < kContextCount; ++ci) {
    const std::string name(context_name(static_cast<Context>(ci)));
    if (!sections[ci].present)
      throw ConfigError(path + ": missing LUT section [" + name + "]");
    require_complete(sections[ci], name);
    bank.context_luts[ci] = sections[ci].lut;
  }
  if (sections[kContextCount].present) {
    require_complete(sections[kContextCount], "user");
    bank.user = sections[kContextCount].lut;
  }
  return bank;
}

SaliencyMap apply_lut(const LabelMap& labels, const SaliencyLut& lut) {
  SaliencyMap out(labels.width, labels.height);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint8_t v = labels.data[i];
    if (v == kVoidLabel) {
      out.data[i] = lut.void_weight;
    } else if (v < kClassCount) {
      out.data[i] = lut.weights[v];
    } else {
      throw UnsupportedLabelIndex("label value " + std::to_string(v) + " outside 0..20");
    }
  }
  return out;
}

const SaliencyLut& select_lut(const LutBank& bank, Context ctx, bool user_override) {
  if (user_override) {
    if (!bank.user) throw MissingUserLut("user LUT requested but the bank has no [user] section");
    return *bank.user;
  }
  return bank.context_luts[static_cast<int>(ctx)];
}

std::pair<SaliencyMap, Context> semantic_saliency(const LabelMap& labels, const LutBank& bank,
                                                  const Mlp& model, bool user_override) {
  const Context ctx = classify(model, labels);
  return {apply_lut(labels, select_lut(bank, ctx, user_override)), ctx};
}

}  // namespace salmap
