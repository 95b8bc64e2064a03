// include/csforge/romanize.hpp

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

#include <string>
#include <string_view>

namespace csforge {

/// Text over [a-z0-9 ], lowercase, single spaces, no leading/trailing space.
struct RomanizedText {
  std::string text;
  std::string source_lang;
};

/// Deterministic transliteration to lowercase ASCII.
///
/// Per code point: Cyrillic and Greek letters go through fixed tables
/// (Bulgarian streamlined system, ELOT 743 without digraph context rules),
/// everything else is NFKD-decomposed with combining marks dropped, and a
/// handful of Latin letters without a decomposition (ß, æ, ø, ł, ...) are
/// spelled out. Punctuation and symbols are deleted, whitespace collapses to
/// one space. Anything else (CJK, Arabic, ...) raises UnmappableCharacter
/// naming the code point.
///
/// Empty input yields empty output; the result is a fixed point of romanize.
RomanizedText romanize(std::string_view text, std::string_view lang = {});

/// The Latin spelling used for one lowercase Cyrillic or Greek letter, or
/// an empty view if the letter is not in the tables.
std::string_view transliterate_letter(char32_t lowercase_cp);

}  // namespace csforge
