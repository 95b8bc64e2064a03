// src/romanize.cpp

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

#include "csforge/romanize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <array>
#include <cstdint>
#include <cstdio>

#include "csforge/error.hpp"

namespace csforge {

namespace {

// U+0430 .. U+044F
constexpr std::array<std::string_view, 32> kCyrillicBasic = {
    "a", "b", "v", "g", "d",  "e",  "zh", "z",   "i", "y", "k",
    "l", "m", "n", "o", "p",  "r",  "s",  "t",   "u", "f", "h",
    "ts", "ch", "sh", "sht", "a", "y", "y", "e", "yu", "ya"};

// U+0450 .. U+045F
constexpr std::array<std::string_view, 16> kCyrillicExtended = {
    "e", "yo", "dj", "gj", "ye", "dz", "i", "yi",
    "j", "lj", "nj", "c",  "kj", "i",  "u", "dz"};

// U+03B1 .. U+03C9 (U+03C2 is final sigma)
constexpr std::array<std::string_view, 25> kGreek = {
    "a", "v", "g", "d", "e", "z", "i", "th", "i", "k", "l", "m", "n",
    "x", "o", "p", "r", "s", "s", "t", "y", "f", "ch", "ps", "o"};

std::string_view latin_extra(UChar32 c) {
  switch (c) {
    case 0x00DF: return "ss";  // ß
    case 0x00E6: return "ae";  // æ
    case 0x00F8: return "o";   // ø
    case 0x0153: return "oe";  // œ
    case 0x0111: return "d";   // đ
    case 0x00F0: return "d";   // ð
    case 0x0142: return "l";   // ł
    case 0x0127: return "h";   // ħ
    case 0x0131: return "i";   // ı
    case 0x00FE: return "th";  // þ
    case 0x014B: return "n";   // ŋ
    case 0x017F: return "s";   // ſ
    case 0x0138: return "k";   // ĸ
    case 0x0167: return "t";   // ŧ
    case 0x0192: return "f";   // ƒ
  }
  return {};
}

const icu::Normalizer2& nfkd() {
  UErrorCode status = U_ZERO_ERROR;
  return *icu::Normalizer2::getNFKDInstance(status);
}

[[noreturn]] void unmappable(UChar32 c) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
  fail(ErrorCode::kUnmappableCharacter,
       std::string("cannot romanize code point ") + buf);
}

class Builder {
 public:
  void letters(std::string_view s) {
    if (pending_space_ && !out_.empty()) out_.push_back(' ');
    pending_space_ = false;
    out_.append(s);
  }
  void space() { pending_space_ = true; }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  bool pending_space_ = false;
};

// Handles one code point that is already decomposed (or needs no
// decomposition). Returns false if nothing applies.
bool emit_simple(UChar32 c, Builder& out) {
  if (c < 0x80) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      const char ch = static_cast<char>(c);
      out.letters(std::string_view(&ch, 1));
    } else if (c >= 'A' && c <= 'Z') {
      const char ch = static_cast<char>(c - 'A' + 'a');
      out.letters(std::string_view(&ch, 1));
    } else if (u_isUWhiteSpace(c)) {
      out.space();
    }
    // Remaining ASCII is punctuation, symbols or controls: dropped.
    return true;
  }
  const UChar32 lower = u_tolower(c);
  if (auto t = transliterate_letter(static_cast<char32_t>(lower)); !t.empty()) {
    out.letters(t);
    return true;
  }
  if (auto t = latin_extra(lower); !t.empty()) {
    out.letters(t);
    return true;
  }
  if (u_isUWhiteSpace(c)) {
    out.space();
    return true;
  }
  const auto type = static_cast<UCharCategory>(u_charType(c));
  switch (type) {
    case U_NON_SPACING_MARK:
    case U_ENCLOSING_MARK:
    case U_COMBINING_SPACING_MARK:
    case U_FORMAT_CHAR:
    case U_CONTROL_CHAR:
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_CONNECTOR_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    case U_DECIMAL_DIGIT_NUMBER: {
      const char ch = static_cast<char>('0' + u_charDigitValue(c));
      out.letters(std::string_view(&ch, 1));
      return true;
    }
    default:
      return false;
  }
}

}  // namespace

std::string_view transliterate_letter(char32_t c) {
  if (c >= 0x0430 && c <= 0x044F) return kCyrillicBasic[c - 0x0430];
  if (c >= 0x0450 && c <= 0x045F) return kCyrillicExtended[c - 0x0450];
  if (c == 0x0491) return "g";  // ґ
  if (c >= 0x03B1 && c <= 0x03C9) return kGreek[c - 0x03B1];
  return {};
}

RomanizedText romanize(std::string_view text, std::string_view lang) {
  Builder out;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto len = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) unmappable(0xFFFD);
    if (emit_simple(c, out)) continue;

    // Precomposed letters: decompose, keep the base, drop the marks.
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString decomposed =
        nfkd().normalize(icu::UnicodeString(c), status);
    if (U_FAILURE(status) || decomposed == icu::UnicodeString(c)) {
      unmappable(c);
    }
    for (std::int32_t k = 0; k < decomposed.length();) {
      const UChar32 d = decomposed.char32At(k);
      k += U16_LENGTH(d);
      if (!emit_simple(d, out)) unmappable(c);
    }
  }
  return RomanizedText{out.take(), std::string(lang)};
}

}  // namespace csforge
