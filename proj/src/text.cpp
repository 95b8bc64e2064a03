// src/text.cpp

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

#include "csforge/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace csforge::text {

namespace {

struct CodePoint {
  UChar32 cp;
  std::size_t begin, end;  // byte offsets
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(start),
                   static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }
bool is_punct(UChar32 c) { return u_ispunct(c); }

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  return *icu::Normalizer2::getNFCInstance(status);
}

}  // namespace

std::string fold_key(std::string_view token) {
  bool ascii = true;
  for (unsigned char c : token) ascii = ascii && c < 0x80;
  if (ascii) {
    std::string out(token);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<std::int32_t>(token.size())));
  icu::UnicodeString normalized = nfc().normalize(u, status);
  if (U_FAILURE(status)) normalized = u;
  normalized.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const auto cps = decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i].cp)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].cp)) ++j;
    std::size_t first = i, last = j;
    while (first < last && is_punct(cps[first].cp)) ++first;
    while (last > first && is_punct(cps[last - 1].cp)) --last;
    if (first < last) {
      std::string surface(
          text.substr(cps[first].begin, cps[last - 1].end - cps[first].begin));
      std::string key = fold_key(surface);
      tokens.push_back({std::move(surface), std::move(key)});
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> token_surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.surface));
  return out;
}

std::vector<std::string> token_keys(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize(text)) out.push_back(std::move(t.key));
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> find_run(
    std::span<const std::string> haystack,
    std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return std::nullopt;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < needle.size() && match; ++k) {
      match = haystack[i + k] == needle[k];
    }
    if (match) return std::make_pair(i, i + needle.size());
  }
  return std::nullopt;
}

std::pair<std::string, std::string> outer_punctuation(std::string_view text) {
  const auto cps = decode(text);
  std::size_t first = 0, last = cps.size();
  while (first < last && is_space(cps[first].cp)) ++first;
  while (last > first && is_space(cps[last - 1].cp)) --last;
  if (first == last) return {};

  std::size_t lead_end = first;
  while (lead_end < last && is_punct(cps[lead_end].cp)) ++lead_end;
  if (lead_end == last) return {};  // nothing but punctuation
  std::size_t trail_begin = last;
  while (trail_begin > lead_end && is_punct(cps[trail_begin - 1].cp)) {
    --trail_begin;
  }
  std::string lead, trail;
  if (lead_end > first) {
    lead = std::string(text.substr(cps[first].begin,
                                   cps[lead_end - 1].end - cps[first].begin));
  }
  if (trail_begin < last) {
    trail = std::string(text.substr(
        cps[trail_begin].begin, cps[last - 1].end - cps[trail_begin].begin));
  }
  return {lead, trail};
}

bool is_punctuation_only(std::string_view text) {
  for (const auto& c : decode(text)) {
    if (u_isalnum(c.cp)) return false;
  }
  return true;
}

}  // namespace csforge::text
