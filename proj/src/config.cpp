#include "salmap/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "salmap/errors.hpp"

namespace salmap {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_entry(const KvEntry& where, const std::string& what) {
  throw ConfigError("line " + std::to_string(where.line) + ": " + what + " (key '" + where.key +
                    "', value '" + where.value + "')");
}

}  // namespace

std::vector<KvEntry> parse_kv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::vector<KvEntry> entries;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(f, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3)
        throw ConfigError(path + ":" + std::to_string(line) + ": malformed section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section.empty())
        throw ConfigError(path + ":" + std::to_string(line) + ": empty section name");
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line) + ": expected 'key = value'");
    KvEntry e;
    e.section = section;
    e.key = trim(text.substr(0, eq));
    e.value = trim(text.substr(eq + 1));
    e.line = line;
    if (e.key.empty())
      throw ConfigError(path + ":" + std::to_string(line) + ": empty key");
    if (e.value.empty())
      throw ConfigError(path + ":" + std::to_string(line) + ": empty value");
    entries.push_back(std::move(e));
  }
  return entries;
}

bool parse_bool(const std::string& value, const KvEntry& where) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_entry(where, "expected a boolean (true/false/1/0)");
}

double parse_double(const std::string& value, const KvEntry& where) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || !std::isfinite(v))
    bad_entry(where, "expected a finite number");
  return v;
}

int parse_int(const std::string& value, const KvEntry& where) {
  int v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
    bad_entry(where, "expected an integer");
  return v;
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  for (const KvEntry& e : parse_kv_file(path)) {
    if (!e.section.empty())
      throw ConfigError(path + ":" + std::to_string(e.line) +
                        ": sections are not allowed in a pipeline config");
    if (e.key == "block_size") {
      cfg.params.block_size = parse_int(e.value, e);
    } else if (e.key == "p") {
      cfg.params.p = parse_double(e.value, e);
    } else if (e.key == "w1") {
      cfg.params.fusion.w1 = parse_double(e.value, e);
    } else if (e.key == "w2") {
      cfg.params.fusion.w2 = parse_double(e.value, e);
    } else if (e.key == "sigma_sq") {
      cfg.params.center.sigma_sq = parse_double(e.value, e);
    } else if (e.key == "center_prior") {
      cfg.params.center.enabled = parse_bool(e.value, e);
    } else if (e.key == "smooth") {
      cfg.params.smooth = parse_bool(e.value, e);
    } else if (e.key == "smooth_size") {
      cfg.params.smooth_size = parse_int(e.value, e);
    } else if (e.key == "lut_bank") {
      cfg.lut_bank = e.value;
    } else if (e.key == "model") {
      cfg.model = e.value;
    } else if (e.key == "user_lut") {
      cfg.user_lut = parse_bool(e.value, e);
    } else {
      throw ConfigError(path + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
  }
}

void validate(const PipelineConfig& cfg) {
  const PipelineParams& p = cfg.params;
  if (p.block_size < 1) throw ConfigError("block_size must be at least 1");
  if (!(p.p >= 0.0)) throw ConfigError("p must be non-negative");
  if (!(p.fusion.w1 >= 0.0) || !(p.fusion.w2 >= 0.0))
    throw ConfigError("fusion weights must be non-negative");
  if (!(p.fusion.w1 + p.fusion.w2 > 0.0)) throw ConfigError("fusion weights must not both be zero");
  if (!(p.center.sigma_sq > 0.0)) throw ConfigError("sigma_sq must be positive");
  if (p.smooth_size < 1) throw ConfigError("smooth_size must be at least 1");
}

}  // namespace salmap
