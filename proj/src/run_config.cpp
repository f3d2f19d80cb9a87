// Copyright 2026 The lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lra/run_config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lra/hashing.hpp"
#include "lra/rng.hpp"

namespace lra {
namespace {

// Every key any command understands. Central so that one config file can
// drive several commands while typos still fail fast.
constexpr std::array kKnownKeys = {
    "seed", "n_vertices", "m", "method", "center", "normalize_scale",
    "resolution",
    "fms_max_iterations", "fms_tolerance", "fms_weight_floor",
    "corpus", "corpus_count", "corpus_seed",
    "ribbon_length_lo", "ribbon_length_hi", "ribbon_aspect_lo",
    "ribbon_aspect_hi", "ribbon_bend_scale", "ribbon_taper_max",
    "ribbon_rotation_max", "ribbon_place_lo", "ribbon_place_hi",
    "ribbon_max_retries",
    "rank_dim", "rank_coeff_scale",
    "eval_corpus", "eval_corpus_count", "eval_corpus_seed",
    "eval_ribbon_bend_scale", "eval_ribbon_rotation_max",
    "noise_fraction", "noise_vertices_min", "noise_vertices_max",
    "noise_magnitude_lo", "noise_magnitude_hi", "noise_seed",
    "dims",
    "focal_alpha", "focal_gamma", "focal_clamp", "lambda", "k",
    "regression_norm",
};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

void RunConfig::assign(const std::string& key, const std::string& value,
                       bool allow_repeat) {
  if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  if (!allow_repeat && values_.count(key) > 0) {
    throw ConfigError("duplicate configuration key '" + key + "'");
  }
  values_[key] = value;
}

RunConfig RunConfig::from_file(const std::string& path) {
  RunConfig config;
  if (path.empty()) return config;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        " is not a key = value assignment");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        " has an empty key or value");
    }
    try {
      config.assign(key, value, /*allow_repeat=*/false);
    } catch (const ConfigError& err) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return config;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= assignment.size()) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  assign(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)),
         /*allow_repeat=*/true);
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_double_strict(it->second);
  } catch (const DataError& err) {
    throw ConfigError("key '" + key + "': " + err.what());
  }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  errno = 0;
  char* end = nullptr;
  const long long parsed = std::strtoll(it->second.c_str(), &end, 10);
  if (errno != 0 || end != it->second.c_str() + it->second.size() ||
      parsed < INT32_MIN || parsed > INT32_MAX) {
    throw ConfigError("key '" + key + "' is not a valid integer: '" + it->second + "'");
  }
  return static_cast<int>(parsed);
}

std::uint64_t RunConfig::get_uint64(const std::string& key,
                                    std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.empty() || it->second[0] == '-') {
    throw ConfigError("key '" + key + "' must be a non-negative integer");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(it->second.c_str(), &end, 10);
  if (errno != 0 || end != it->second.c_str() + it->second.size()) {
    throw ConfigError("key '" + key + "' is not a valid integer: '" + it->second + "'");
  }
  return parsed;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("key '" + key + "' must be true/false/1/0, got '" + it->second + "'");
}

std::vector<int> RunConfig::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  std::stringstream stream(it->second);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("key '" + key + "' has an empty list entry");
    errno = 0;
    char* end = nullptr;
    const long long parsed = std::strtoll(item.c_str(), &end, 10);
    if (errno != 0 || end != item.c_str() + item.size()) {
      throw ConfigError("key '" + key + "' has a non-integer entry '" + item + "'");
    }
    out.push_back(static_cast<int>(parsed));
  }
  if (out.empty()) throw ConfigError("key '" + key + "' is an empty list");
  return out;
}

std::string RunConfig::hash() const {
  std::uint64_t state = kFnvOffsetBasis;
  for (const auto& [key, value] : values_) {  // std::map iterates sorted
    state = fnv1a64(key + "=" + value + "\n", state);
  }
  return to_hex(state);
}

std::uint64_t RunConfig::master_seed() const { return get_uint64("seed", 42); }

CanonFlags RunConfig::canon_flags() const {
  return {get_bool("center", true), get_bool("normalize_scale", false)};
}

FmsParams RunConfig::fms_params() const {
  FmsParams params;
  params.max_iterations = get_int("fms_max_iterations", 100);
  params.tolerance = get_double("fms_tolerance", 1e-9);
  params.weight_floor = get_double("fms_weight_floor", 1e-10);
  return params;
}

int RunConfig::resolution() const { return get_int("resolution", 512); }

CorpusSpec RunConfig::corpus_spec(bool eval_variant) const {
  const std::string prefix = eval_variant ? "eval_" : "";
  CorpusSpec spec;

  std::string source = get_string("corpus", "synthetic:ribbon");
  if (eval_variant) source = get_string("eval_corpus", source);
  if (source.rfind("synthetic:", 0) == 0) {
    spec.family = source.substr(std::string("synthetic:").size());
  } else {
    spec.jsonl_path = source;
  }

  spec.count = get_int(prefix + "corpus_count", get_int("corpus_count", 500));
  const std::uint64_t explicit_seed =
      get_uint64(prefix + "corpus_seed", get_uint64("corpus_seed", 0));
  const char* tag = eval_variant ? "eval-corpus" : "corpus";
  spec.seed = explicit_seed != 0 ? explicit_seed
                                 : Rng(master_seed()).split(tag).seed();
  spec.n_vertices = get_int("n_vertices", 14);
  spec.flags = canon_flags();

  spec.ribbon.length_lo = get_double("ribbon_length_lo", spec.ribbon.length_lo);
  spec.ribbon.length_hi = get_double("ribbon_length_hi", spec.ribbon.length_hi);
  spec.ribbon.aspect_lo = get_double("ribbon_aspect_lo", spec.ribbon.aspect_lo);
  spec.ribbon.aspect_hi = get_double("ribbon_aspect_hi", spec.ribbon.aspect_hi);
  spec.ribbon.bend_scale = get_double("ribbon_bend_scale", spec.ribbon.bend_scale);
  spec.ribbon.taper_max = get_double("ribbon_taper_max", spec.ribbon.taper_max);
  spec.ribbon.rotation_max =
      get_double("ribbon_rotation_max", spec.ribbon.rotation_max);
  spec.ribbon.place_lo = get_double("ribbon_place_lo", spec.ribbon.place_lo);
  spec.ribbon.place_hi = get_double("ribbon_place_hi", spec.ribbon.place_hi);
  spec.ribbon.max_retries = get_int("ribbon_max_retries", spec.ribbon.max_retries);
  if (eval_variant) {
    spec.ribbon.bend_scale =
        get_double("eval_ribbon_bend_scale", spec.ribbon.bend_scale);
    spec.ribbon.rotation_max =
        get_double("eval_ribbon_rotation_max", spec.ribbon.rotation_max);
  }

  spec.rank = get_int("rank_dim", spec.rank);
  spec.rank_coeff_scale = get_double("rank_coeff_scale", spec.rank_coeff_scale);
  return spec;
}

NoiseSpec RunConfig::noise_spec() const {
  NoiseSpec spec;
  spec.corrupt_fraction = get_double("noise_fraction", spec.corrupt_fraction);
  spec.vertices_min = get_int("noise_vertices_min", spec.vertices_min);
  spec.vertices_max = get_int("noise_vertices_max", spec.vertices_max);
  spec.magnitude_lo = get_double("noise_magnitude_lo", spec.magnitude_lo);
  spec.magnitude_hi = get_double("noise_magnitude_hi", spec.magnitude_hi);
  const std::uint64_t explicit_seed = get_uint64("noise_seed", 0);
  spec.seed = explicit_seed != 0 ? explicit_seed
                                 : Rng(master_seed()).split("noise").seed();
  return spec;
}

}  // namespace lra
