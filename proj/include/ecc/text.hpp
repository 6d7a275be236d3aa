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

// Rule-based tokenization, token normalization and sentence splitting.
//
// Tokenizer rules, applied over Unicode scalar values:
//   - whitespace separates tokens and is never part of one;
//   - a punctuation or symbol character (general category P* or S*) is a
//     token of its own;
//   - apostrophes and hyphens stay inside a token when flanked by word
//     characters on both sides ("Hawking's", "well-known");
//   - '.' and ',' stay inside a token when flanked by digits ("3,000", "2.5").
//
// Sentence splitter rules: a run of '.', '!' or '?' (plus any closing quotes
// or brackets) ends a sentence when followed by whitespace and then an
// uppercase letter or an opening quote/bracket. A single '.' does not end a
// sentence when the word it closes is a listed abbreviation or a single
// uppercase initial ("J.").

#pragma once

#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ecc/error.hpp"
#include "ecc/unicode.hpp"

namespace ecc {

// Half-open range [start, end) in Unicode scalar values.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool Overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const Span &) const = default;
};

struct Token {
  std::string text;
  Span span;

  bool operator==(const Token &) const = default;
};

struct Sentence {
  Span span;
  std::vector<Token> tokens;
};

inline std::string Slice(std::u32string_view text, Span span) {
  return unicode::Encode(text.substr(span.start, span.size()));
}

// Abbreviations whose trailing period never ends a sentence. Matching is on
// the exact whitespace-delimited word including its final period.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  AbbreviationList(std::initializer_list<std::string_view> words) {
    for (auto w : words) Add(w);
  }

  // Same contents as resources/abbreviations.txt.
  static const AbbreviationList &Builtin() {
    static const AbbreviationList list = {
        "Mr.",   "Mrs.", "Ms.",   "Dr.",   "Prof.", "Sr.",     "Jr.",
        "St.",   "Mt.",  "Gen.",  "Col.",  "Capt.", "Lt.",     "Sgt.",
        "Rev.",  "Hon.", "Gov.",  "Sen.",  "Rep.",  "Pres.",   "Inc.",
        "Ltd.",  "Co.",  "Corp.", "Bros.", "vs.",   "etc.",    "e.g.",
        "i.e.",  "cf.",  "al.",   "approx.", "ca.", "viz.",    "No.",
        "Nos.",  "Vol.", "Fig.",  "Figs.", "Eq.",   "Ref.",    "Jan.",
        "Feb.",  "Mar.", "Apr.",  "Jun.",  "Jul.",  "Aug.",    "Sep.",
        "Sept.", "Oct.", "Nov.",  "Dec.",  "U.S.",  "U.K.",    "U.N.",
        "a.m.",  "p.m."};
    return list;
  }

  // One abbreviation per line; blank lines and lines starting with '#' are
  // ignored.
  static AbbreviationList Load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open abbreviation list");
    AbbreviationList list;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                               line.back() == '\t')) {
        line.pop_back();
      }
      std::size_t first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      list.Add(line.substr(first));
    }
    return list;
  }

  void Add(std::string_view word) {
    words_.insert(unicode::Decode(unicode::ToNfc(word)));
  }
  bool Contains(std::u32string_view word) const {
    return words_.count(std::u32string(word)) > 0;
  }
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::u32string> &words() const { return words_; }

 private:
  std::unordered_set<std::u32string> words_;
};

namespace internal {

inline bool IsApostrophe(char32_t c) {
  return c == U'\'' || c == U'’' || c == U'ʼ';
}
inline bool IsHyphen(char32_t c) {
  return c == U'-' || c == U'‐' || c == U'‑';
}
inline bool IsTerminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }
inline bool IsCloser(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'”':
    case U'’': case U'»':
      return true;
    default:
      return false;
  }
}
inline bool IsOpener(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U'(': case U'[': case U'“':
    case U'‘': case U'«': case U'¿': case U'¡':
      return true;
    default:
      return false;
  }
}

// True when the character at i joins the word characters around it.
inline bool IsInternalJoiner(std::u32string_view t, std::size_t i) {
  if (i == 0 || i + 1 >= t.size()) return false;
  const char32_t prev = t[i - 1], c = t[i], next = t[i + 1];
  if (IsApostrophe(c) || IsHyphen(c)) {
    return unicode::IsWordChar(prev) && unicode::IsWordChar(next);
  }
  if (c == U'.' || c == U',') {
    return unicode::IsDigit(prev) && unicode::IsDigit(next);
  }
  return false;
}

inline std::vector<Token> Tokenize(std::u32string_view t, std::size_t base = 0) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < t.size()) {
    const char32_t c = t[i];
    if (unicode::IsSpace(c)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (unicode::IsWordChar(c)) {
      while (end < t.size() &&
             (unicode::IsWordChar(t[end]) || IsInternalJoiner(t, end))) {
        ++end;
      }
    }
    tokens.push_back({Slice(t, {i, end}), {base + i, base + end}});
    i = end;
  }
  return tokens;
}

inline std::u32string NormalizeToken(std::u32string_view t) {
  std::u32string collapsed;
  collapsed.reserve(t.size());
  bool pending_space = false;
  for (char32_t c : t) {
    if (unicode::IsSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !collapsed.empty()) collapsed.push_back(U' ');
    pending_space = false;
    collapsed.push_back(c);
  }
  auto strippable = [](char32_t c) {
    return unicode::IsPunctOrSymbol(c) || unicode::IsSpace(c);
  };
  std::size_t b = 0, e = collapsed.size();
  while (b < e && strippable(collapsed[b])) ++b;
  while (e > b && strippable(collapsed[e - 1])) --e;
  return unicode::ToLower(std::u32string_view(collapsed).substr(b, e - b));
}

// Index of the first character of the whitespace-delimited word that ends
// at position `last` (inclusive), skipping opening quotes and brackets.
inline std::size_t WordStart(std::u32string_view t, std::size_t last) {
  std::size_t b = last;
  while (b > 0 && !unicode::IsSpace(t[b - 1])) --b;
  while (b < last && IsOpener(t[b])) ++b;
  return b;
}

inline bool SuppressedByAbbreviation(std::u32string_view t, std::size_t dot,
                                     const AbbreviationList &abbreviations) {
  const std::size_t b = WordStart(t, dot);
  std::u32string_view word = t.substr(b, dot - b + 1);
  if (abbreviations.Contains(word)) return true;
  return word.size() == 2 && unicode::IsUpper(word[0]);
}

inline std::vector<Sentence> SplitSentences(
    std::u32string_view t, const AbbreviationList &abbreviations) {
  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t start, std::size_t end) {
    Sentence s;
    s.span = {start, end};
    s.tokens = Tokenize(t.substr(start, end - start), start);
    sentences.push_back(std::move(s));
  };

  std::size_t pos = 0;
  while (pos < t.size()) {
    while (pos < t.size() && unicode::IsSpace(t[pos])) ++pos;
    if (pos >= t.size()) break;
    const std::size_t start = pos;
    std::size_t end = std::string_view::npos;
    std::size_t j = start;
    while (j < t.size()) {
      if (!IsTerminator(t[j])) {
        ++j;
        continue;
      }
      std::size_t k = j;
      while (k + 1 < t.size() && IsTerminator(t[k + 1])) ++k;
      const bool single_period = k == j && t[j] == U'.';
      std::size_t close = k + 1;
      while (close < t.size() && IsCloser(t[close])) ++close;

      bool boundary = false;
      if (close >= t.size()) {
        boundary = true;
      } else if (unicode::IsSpace(t[close])) {
        std::size_t next = close;
        while (next < t.size() && unicode::IsSpace(t[next])) ++next;
        boundary = next >= t.size() || unicode::IsUpper(t[next]) ||
                   IsOpener(t[next]);
      }
      if (boundary && single_period &&
          SuppressedByAbbreviation(t, j, abbreviations)) {
        boundary = false;
      }
      if (boundary) {
        end = close;
        break;
      }
      j = close;
    }
    if (end == std::string_view::npos) {
      end = t.size();
      while (end > start && unicode::IsSpace(t[end - 1])) --end;
    }
    emit(start, end);
    pos = end;
  }
  return sentences;
}

}  // namespace internal

inline std::vector<Token> Tokenize(std::string_view text) {
  return internal::Tokenize(unicode::Decode(text));
}

// Lowercases, strips leading and trailing punctuation, collapses internal
// whitespace. Idempotent.
inline std::string NormalizeToken(std::string_view token_text) {
  return unicode::Encode(internal::NormalizeToken(unicode::Decode(token_text)));
}

inline std::vector<Sentence> SplitSentences(
    std::string_view text,
    const AbbreviationList &abbreviations = AbbreviationList::Builtin()) {
  return internal::SplitSentences(unicode::Decode(text), abbreviations);
}

// Normalized tokens with punctuation-only tokens dropped. This is the token
// stream ROUGE and the extractive oracle operate on.
inline std::vector<std::string> NormalizedTokens(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token &tok : tokens) {
    std::string n = NormalizeToken(tok.text);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

inline std::vector<std::string> NormalizedTokens(std::string_view text) {
  return NormalizedTokens(Tokenize(text));
}

}  // namespace ecc
