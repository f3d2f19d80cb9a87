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
#include <string>
#include <string_view>

namespace lra {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

// 64-bit FNV-1a. Used for content fingerprints (basis matrices, corpora,
// configs); not a cryptographic hash.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t state = kFnvOffsetBasis) {
  for (unsigned char c : bytes) {
    state ^= static_cast<std::uint64_t>(c);
    state *= kFnvPrime;
  }
  return state;
}

// Lower-case hex, zero padded to 16 digits.
std::string to_hex(std::uint64_t value);

// 17-significant-digit decimal form ("%.17g"), enough to round-trip any
// double exactly. Serialized matrices and fingerprints are built from these
// strings so that files written on any IEEE-754 platform compare
// byte-identical.
std::string format_double17(double value);

// Parses a double, rejecting trailing garbage and non-finite results.
double parse_double_strict(const std::string& text);

}  // namespace lra
