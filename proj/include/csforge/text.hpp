// include/csforge/text.hpp

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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Tokenization shared by word mapping, alignment, text substitution and the
// metrics: split on Unicode whitespace, strip leading/trailing Unicode
// punctuation from each piece, drop pieces that become empty.
namespace csforge::text {

struct Token {
  std::string surface;  // punctuation-stripped, original case
  std::string key;      // NFC + full case folding of `surface`
};

std::vector<Token> tokenize(std::string_view text);

/// Surfaces only.
std::vector<std::string> token_surfaces(std::string_view text);

/// Case-folded comparison key of a single token.
std::string fold_key(std::string_view token);

/// Keys of every token in `text`.
std::vector<std::string> token_keys(std::string_view text);

/// Lowercased form (ICU root locale), used for type counting.
std::string to_lower(std::string_view text);

/// Index range [first, last) of the first occurrence of `needle` as a
/// contiguous run inside `haystack`, or nullopt. Empty needles never match.
std::optional<std::pair<std::size_t, std::size_t>> find_run(
    std::span<const std::string> haystack, std::span<const std::string> needle);

/// Leading and trailing punctuation runs of the whole (trimmed) text, e.g.
/// {"¿", "?"} for "¿Qué tal?".
std::pair<std::string, std::string> outer_punctuation(std::string_view text);

/// True when `text` contains no letters or digits.
bool is_punctuation_only(std::string_view text);

}  // namespace csforge::text
