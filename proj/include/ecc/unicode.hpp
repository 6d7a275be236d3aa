// Copyright 2026 The ECC Toolkit Authors.
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

// Thin wrappers over ICU. All text inside the toolkit is UTF-8 at the API
// boundary and UTF-32 internally, so offsets count Unicode scalar values.

#pragma once

#include <string>
#include <string_view>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "ecc/error.hpp"

namespace ecc::unicode {

// Invalid byte sequences decode to U+FFFD.
inline std::u32string Decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto *s = reinterpret_cast<const uint8_t *>(utf8.data());
  int32_t i = 0;
  const auto length = static_cast<int32_t>(utf8.size());
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

inline std::string Encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char *>(buf), n);
  }
  return out;
}

inline std::string ToNfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw IoError("ICU NFC data unavailable");
  icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (nfc->isNormalized(in, status) && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc->normalize(in, status);
  if (U_FAILURE(status)) throw InvalidInput("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

// Root-locale full lowercase mapping, independent of the process locale.
inline std::u32string ToLower(std::u32string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32 *>(text.data()),
      static_cast<int32_t>(text.size()));
  s.toLower(icu::Locale::getRoot());
  std::u32string out(static_cast<size_t>(s.countChar32()), U'\0');
  UErrorCode status = U_ZERO_ERROR;
  s.toUTF32(reinterpret_cast<UChar32 *>(out.data()),
            static_cast<int32_t>(out.size()), status);
  return out;
}

inline bool IsSpace(char32_t c) { return u_isUWhiteSpace(c); }

// General categories P* and S*.
inline bool IsPunctOrSymbol(char32_t c) {
  const int32_t mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

inline bool IsWordChar(char32_t c) { return !IsSpace(c) && !IsPunctOrSymbol(c); }

inline bool IsDigit(char32_t c) { return u_isdigit(c); }

inline bool IsUpper(char32_t c) { return u_isupper(c) || u_istitle(c); }

inline bool IsCurrency(char32_t c) {
  return u_charType(c) == U_CURRENCY_SYMBOL;
}

}  // namespace ecc::unicode
