// include/csforge/rng.hpp

// Copyright 2026  The csforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace csforge {

using Rng = std::mt19937_64;

/// Stable 64-bit seed from a base seed and labels (FNV-1a over the labels,
/// 0x1F-separated, finished with the splitmix64 mixer). Used so that every
/// record and every language pair gets its own stream independent of
/// scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::string_view> parts) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(seed >> (8 * i)));
  for (std::string_view part : parts) {
    for (char c : part) mix_byte(static_cast<unsigned char>(c));
    mix_byte(0x1F);
  }
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

}  // namespace csforge
