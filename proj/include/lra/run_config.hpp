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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lra/corpus.hpp"
#include "lra/robustness.hpp"
#include "lra/subspace.hpp"

namespace lra {

// Flat key = value run configuration with a fixed key registry. Typos are
// rejected at parse time, later assignments from --set overrides win, and
// the effective configuration hashes to a stable fingerprint that output
// files embed.
class RunConfig {
 public:
  RunConfig() = default;

  // Missing path loads defaults only when `path` is empty; otherwise the
  // file must exist. Lines are `key = value`, `#` starts a comment.
  static RunConfig from_file(const std::string& path);

  // A single `key=value` assignment, as given to --set.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;

  // FNV fingerprint of the sorted effective `key=value` pairs.
  std::string hash() const;

  // Assembled parameter bundles. The master seed feeds every derived stream;
  // a corpus/noise seed of 0 means "derive from the master seed".
  std::uint64_t master_seed() const;
  CanonFlags canon_flags() const;
  FmsParams fms_params() const;
  CorpusSpec corpus_spec(bool eval_variant = false) const;
  NoiseSpec noise_spec() const;
  int resolution() const;

 private:
  void assign(const std::string& key, const std::string& value, bool allow_repeat);

  std::map<std::string, std::string> values_;
};

}  // namespace lra
