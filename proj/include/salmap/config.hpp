#pragma once

#include <string>
#include <vector>

#include "salmap/pipeline.hpp"

namespace salmap {

// One `key = value` line of a config file; `section` is the bare name of the
// enclosing `[section]` header, empty before the first header.
struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

// Shared reader for the flat and sectioned config formats: `#` comments,
// blank lines ignored, whitespace trimmed. Throws ConfigError (with a line
// number) on anything else, IoError when unreadable.
std::vector<KvEntry> parse_kv_file(const std::string& path);

bool parse_bool(const std::string& value, const KvEntry& where);
double parse_double(const std::string& value, const KvEntry& where);
int parse_int(const std::string& value, const KvEntry& where);

// Everything a pipeline run needs, plus the file paths the CLI resolves.
struct PipelineConfig {
  PipelineParams params;
  std::string lut_bank;  // empty -> built-in defaults
  std::string model;
  bool user_lut = false;
};

// Applies `key = value` pairs from a flat config file over `cfg`. Keys:
// block_size, p, w1, w2, sigma_sq, center_prior, smooth, smooth_size,
// lut_bank, model, user_lut. Unknown keys are errors.
void apply_config_file(PipelineConfig& cfg, const std::string& path);

// Range-checks every numeric field; throws ConfigError on violations.
void validate(const PipelineConfig& cfg);

}  // namespace salmap
