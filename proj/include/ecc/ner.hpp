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

// Named-entity sets for entity coverage precision.
//
// The built-in extractor is rule based. Layers are applied in priority order
// and a later layer may only use tokens no earlier layer claimed:
//
//   1. gazetteer phrases            GAZETTEER:<name>
//   2. dates                        DATE     (5 March 2017, March 5, 2017,
//                                             March 2017, 5 March)
//   3. currency amounts             MONEY    (£3,000, $5 million, 20€)
//   4. numbers and percentages      NUMERIC  (2019, 3.5, 12%, 2nd)
//   5. capitalized token runs       PROPN_SPAN
//
// Within a layer, overlapping candidates are resolved longest match first,
// then leftmost. A capitalized run that begins at the first word of a
// sentence is kept only if it spans two or more tokens, so "The" or
// "However" alone never count. A trailing possessive 's is left out of a
// PROPN_SPAN.
//
// Entities from other systems plug in through the annotation file:
//
//   {"id": str, "field": "document"|"reference_summary"|"hypothesis",
//    "spans": [{"start": int, "end": int, "text": str, "label": str}]}
//
// Offsets count Unicode scalar values in the NFC-normalized field text with
// any leading control codes removed.

#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ecc/corpus.hpp"
#include "ecc/error.hpp"
#include "ecc/text.hpp"
#include "ecc/unicode.hpp"

namespace ecc {

struct EntitySpan {
  std::string text;
  std::string label;
  Span span;

  bool operator==(const EntitySpan &) const = default;
};

// N(t): normalized entity surface forms.
struct EntitySet {
  std::set<std::string> forms;

  std::size_t size() const { return forms.size(); }
  bool empty() const { return forms.empty(); }
  bool Contains(const std::string &form) const { return forms.count(form) > 0; }
  bool operator==(const EntitySet &) const = default;
};

// Word-wise NormalizeToken joined by single spaces. Empty when the text has
// no word content.
inline std::string NormalizeEntityText(std::string_view text) {
  std::string out;
  const std::u32string t = unicode::Decode(text);
  std::size_t i = 0;
  while (i < t.size()) {
    while (i < t.size() && unicode::IsSpace(t[i])) ++i;
    std::size_t j = i;
    while (j < t.size() && !unicode::IsSpace(t[j])) ++j;
    if (j > i) {
      std::string word = unicode::Encode(
          internal::NormalizeToken(std::u32string_view(t).substr(i, j - i)));
      if (!word.empty()) {
        if (!out.empty()) out.push_back(' ');
        out += word;
      }
    }
    i = j;
  }
  return out;
}

inline EntitySet MakeEntitySet(const std::vector<EntitySpan> &spans) {
  EntitySet set;
  for (const EntitySpan &s : spans) {
    std::string form = NormalizeEntityText(s.text);
    if (!form.empty()) set.forms.insert(std::move(form));
  }
  return set;
}

inline bool IsGazetteerName(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

// Exact-match phrase lists. File format: one "name<TAB>phrase" per line,
// '#' comments. Phrases are matched token by token, case-sensitively.
class Gazetteer {
 public:
  struct Entry {
    std::vector<std::string> tokens;
    std::string label;
  };

  void Add(std::string_view name, std::string_view phrase) {
    if (!IsGazetteerName(name)) {
      throw ParameterError("invalid gazetteer name \"" + std::string(name) + "\"");
    }
    Entry entry;
    for (Token &tok : Tokenize(unicode::ToNfc(phrase))) {
      entry.tokens.push_back(std::move(tok.text));
    }
    if (entry.tokens.empty()) return;
    entry.label = "GAZETTEER:" + std::string(name);
    by_first_[entry.tokens.front()].push_back(std::move(entry));
    ++size_;
  }

  static Gazetteer Load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open gazetteer");
    Gazetteer g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw InvalidInput(path + ": line " + std::to_string(line_no) +
                           ": expected name<TAB>phrase");
      }
      try {
        g.Add(line.substr(0, tab), line.substr(tab + 1));
      } catch (const Error &e) {
        throw InvalidInput(path + ": line " + std::to_string(line_no) + ": " +
                           e.what());
      }
    }
    return g;
  }

  const std::vector<Entry> *EntriesStartingWith(const std::string &token) const {
    auto it = by_first_.find(token);
    return it == by_first_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return size_; }

 private:
  std::unordered_map<std::string, std::vector<Entry>> by_first_;
  std::size_t size_ = 0;
};

struct NerOptions {
  const Gazetteer *gazetteer = nullptr;
  const AbbreviationList *abbreviations = &AbbreviationList::Builtin();
};

namespace internal {

struct TokenInfo {
  std::u32string text;
  Span span;
  std::size_t sentence = 0;
  bool sentence_start = false;
};

struct Candidate {
  std::size_t first = 0;  // token range [first, last)
  std::size_t last = 0;
  std::string label;
};

inline bool AllDigits(std::u32string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char32_t c) {
    return c >= U'0' && c <= U'9';
  });
}

inline bool HasOrdinalSuffix(std::u32string_view s, std::size_t *digits_end) {
  static constexpr std::array<std::u32string_view, 4> kSuffixes = {
      U"st", U"nd", U"rd", U"th"};
  for (auto suffix : kSuffixes) {
    if (s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix) {
      *digits_end = s.size() - suffix.size();
      return true;
    }
  }
  return false;
}

// 12, 3,000, 2.5, 1st, 22nd
inline bool IsNumberToken(std::u32string_view s) {
  std::size_t end = s.size();
  if (HasOrdinalSuffix(s, &end) && !AllDigits(s.substr(0, end))) return false;
  std::u32string_view body = s.substr(0, end);
  if (body.empty() || !(body.front() >= U'0' && body.front() <= U'9')) return false;
  if (!(body.back() >= U'0' && body.back() <= U'9')) return false;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char32_t c = body[i];
    if (c >= U'0' && c <= U'9') continue;
    if ((c == U'.' || c == U',') && i + 1 < body.size() &&
        body[i + 1] >= U'0' && body[i + 1] <= U'9') {
      continue;
    }
    return false;
  }
  return true;
}

inline bool IsDayToken(std::u32string_view s) {
  std::size_t end = s.size();
  HasOrdinalSuffix(s, &end);
  std::u32string_view digits = s.substr(0, end);
  if (!AllDigits(digits) || digits.size() > 2) return false;
  const int day = digits.size() == 1 ? digits[0] - U'0'
                                     : (digits[0] - U'0') * 10 + (digits[1] - U'0');
  return day >= 1 && day <= 31;
}

inline bool IsYearToken(std::u32string_view s) {
  return s.size() == 4 && AllDigits(s);
}

inline bool IsMonthToken(std::u32string_view s) {
  static constexpr std::array<std::u32string_view, 24> kMonths = {
      U"January", U"February", U"March",    U"April",   U"May",      U"June",
      U"July",    U"August",   U"September", U"October", U"November", U"December",
      U"Jan",     U"Feb",      U"Mar",      U"Apr",     U"Jun",      U"Jul",
      U"Aug",     U"Sep",      U"Sept",     U"Oct",     U"Nov",      U"Dec"};
  return std::find(kMonths.begin(), kMonths.end(), s) != kMonths.end();
}

inline bool IsScaleWord(std::u32string_view s) {
  static constexpr std::array<std::u32string_view, 8> kScales = {
      U"thousand", U"million", U"billion", U"trillion", U"m", U"bn", U"mn", U"k"};
  return std::find(kScales.begin(), kScales.end(), s) != kScales.end();
}

inline bool IsCurrencyToken(std::u32string_view s) {
  return s.size() == 1 && unicode::IsCurrency(s[0]);
}

inline bool IsCapitalizedToken(std::u32string_view s) {
  return !s.empty() && unicode::IsUpper(s[0]) && s != U"I";
}

// Greedy longest-first selection of non-overlapping candidates over
// unclaimed tokens.
inline void SelectCandidates(std::vector<Candidate> candidates,
                             std::vector<bool> &claimed,
                             std::vector<Candidate> &accepted) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &a, const Candidate &b) {
                     const auto la = a.last - a.first, lb = b.last - b.first;
                     if (la != lb) return la > lb;
                     if (a.first != b.first) return a.first < b.first;
                     return a.label < b.label;
                   });
  for (const Candidate &c : candidates) {
    bool free = true;
    for (std::size_t i = c.first; i < c.last && free; ++i) free = !claimed[i];
    if (!free) continue;
    for (std::size_t i = c.first; i < c.last; ++i) claimed[i] = true;
    accepted.push_back(c);
  }
}

inline std::vector<Candidate> GazetteerCandidates(
    const std::vector<TokenInfo> &toks, const Gazetteer &gazetteer) {
  std::vector<Candidate> out;
  std::vector<std::string> utf8;
  utf8.reserve(toks.size());
  for (const auto &t : toks) utf8.push_back(unicode::Encode(t.text));
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto *entries = gazetteer.EntriesStartingWith(utf8[i]);
    if (!entries) continue;
    for (const auto &entry : *entries) {
      const std::size_t n = entry.tokens.size();
      if (i + n > toks.size()) continue;
      bool match = true;
      for (std::size_t k = 1; k < n && match; ++k) match = utf8[i + k] == entry.tokens[k];
      if (match) out.push_back({i, i + n, entry.label});
    }
  }
  return out;
}

inline std::vector<Candidate> DateCandidates(const std::vector<TokenInfo> &toks) {
  std::vector<Candidate> out;
  auto at = [&](std::size_t i) -> std::u32string_view {
    return i < toks.size() ? std::u32string_view(toks[i].text) : std::u32string_view();
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (IsDayToken(at(i)) && IsMonthToken(at(i + 1))) {
      out.push_back({i, i + 2, "DATE"});
      if (IsYearToken(at(i + 2))) out.push_back({i, i + 3, "DATE"});
    }
    if (IsMonthToken(at(i))) {
      if (IsYearToken(at(i + 1))) out.push_back({i, i + 2, "DATE"});
      if (IsDayToken(at(i + 1)) && at(i + 2) == U"," && IsYearToken(at(i + 3))) {
        out.push_back({i, i + 4, "DATE"});
      }
    }
  }
  return out;
}

inline std::vector<Candidate> MoneyCandidates(const std::vector<TokenInfo> &toks) {
  std::vector<Candidate> out;
  auto adjacent = [&](std::size_t i) {
    return i + 1 < toks.size() && toks[i].span.end == toks[i + 1].span.start;
  };
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (IsCurrencyToken(toks[i].text) && adjacent(i) &&
        IsNumberToken(toks[i + 1].text)) {
      std::size_t last = i + 2;
      if (last < toks.size() && IsScaleWord(toks[last].text)) ++last;
      out.push_back({i, last, "MONEY"});
    }
    if (IsNumberToken(toks[i].text) && adjacent(i) &&
        IsCurrencyToken(toks[i + 1].text)) {
      out.push_back({i, i + 2, "MONEY"});
    }
  }
  return out;
}

inline std::vector<Candidate> NumericCandidates(const std::vector<TokenInfo> &toks) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!IsNumberToken(toks[i].text)) continue;
    std::size_t last = i + 1;
    if (last < toks.size() && toks[last].text == U"%" &&
        toks[i].span.end == toks[last].span.start) {
      ++last;
    }
    out.push_back({i, last, "NUMERIC"});
  }
  return out;
}

inline std::vector<Candidate> ProperNounRuns(const std::vector<TokenInfo> &toks,
                                             const std::vector<bool> &claimed) {
  std::vector<Candidate> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (claimed[i] || !IsCapitalizedToken(toks[i].text)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < toks.size() && !claimed[j] && toks[j].sentence == toks[i].sentence &&
           IsCapitalizedToken(toks[j].text)) {
      ++j;
    }
    if (!toks[i].sentence_start || j - i >= 2) out.push_back({i, j, "PROPN_SPAN"});
    i = j;
  }
  return out;
}

inline bool EndsWithPossessive(std::u32string_view s) {
  return s.size() > 2 && (s.back() == U's' || s.back() == U'S') &&
         IsApostrophe(s[s.size() - 2]);
}

}  // namespace internal

inline std::vector<EntitySpan> ExtractEntities(std::string_view text,
                                               const NerOptions &options = {}) {
  using internal::Candidate;
  const std::u32string t = unicode::Decode(text);
  const auto sentences = internal::SplitSentences(
      t, options.abbreviations ? *options.abbreviations : AbbreviationList::Builtin());

  std::vector<internal::TokenInfo> toks;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    bool seen_word = false;
    for (const Token &tok : sentences[s].tokens) {
      internal::TokenInfo info;
      info.text = t.substr(tok.span.start, tok.span.size());
      info.span = tok.span;
      info.sentence = s;
      if (!seen_word && unicode::IsWordChar(info.text[0])) {
        info.sentence_start = true;
        seen_word = true;
      }
      toks.push_back(std::move(info));
    }
  }

  std::vector<bool> claimed(toks.size(), false);
  std::vector<Candidate> accepted;
  if (options.gazetteer) {
    internal::SelectCandidates(internal::GazetteerCandidates(toks, *options.gazetteer),
                               claimed, accepted);
  }
  internal::SelectCandidates(internal::DateCandidates(toks), claimed, accepted);
  internal::SelectCandidates(internal::MoneyCandidates(toks), claimed, accepted);
  internal::SelectCandidates(internal::NumericCandidates(toks), claimed, accepted);
  internal::SelectCandidates(internal::ProperNounRuns(toks, claimed), claimed, accepted);

  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate &a, const Candidate &b) { return a.first < b.first; });
  std::vector<EntitySpan> spans;
  spans.reserve(accepted.size());
  for (const Candidate &c : accepted) {
    Span span{toks[c.first].span.start, toks[c.last - 1].span.end};
    if (c.label == "PROPN_SPAN" && internal::EndsWithPossessive(toks[c.last - 1].text)) {
      span.end -= 2;
    }
    spans.push_back({Slice(t, span), c.label, span});
  }
  return spans;
}

// Annotation file ----------------------------------------------------------

using AnnotationKey = std::pair<std::string, TextField>;
using AnnotationMap = std::map<AnnotationKey, std::vector<EntitySpan>>;

namespace internal {

inline std::string DescribeSpan(const AnnotationKey &key, const EntitySpan &s) {
  return "id \"" + key.first + "\" " + std::string(FieldName(key.second)) + " span [" +
         std::to_string(s.span.start) + "," + std::to_string(s.span.end) + ") \"" +
         s.text + "\"";
}

}  // namespace internal

// Parses the annotation file and checks each record on its own: well-formed
// spans, sorted and non-overlapping within a record, no duplicate
// (id, field) keys.
inline AnnotationMap LoadExternalAnnotations(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open annotations");
  AnnotationMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsBlank(line)) continue;
    const std::string where = path + ": line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &) {
      throw InvalidInput(where + ": malformed JSON");
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("field") || !j["field"].is_string() || !j.contains("spans") ||
        !j["spans"].is_array()) {
      throw InvalidInput(where + ": expected {\"id\", \"field\", \"spans\"}");
    }
    auto field = ParseFieldName(j["field"].get<std::string>());
    if (!field) {
      throw InvalidInput(where + ": unknown field \"" + j["field"].get<std::string>() + "\"");
    }
    AnnotationKey key{j["id"].get<std::string>(), *field};
    std::vector<EntitySpan> spans;
    for (const auto &s : j["spans"]) {
      if (!s.is_object() || !s.contains("start") || !s["start"].is_number_unsigned() ||
          !s.contains("end") || !s["end"].is_number_unsigned() || !s.contains("text") ||
          !s["text"].is_string() || !s.contains("label") || !s["label"].is_string()) {
        throw InvalidInput(where + ": malformed span " + s.dump());
      }
      EntitySpan span{unicode::ToNfc(s["text"].get<std::string>()),
                      s["label"].get<std::string>(),
                      {s["start"].get<std::size_t>(), s["end"].get<std::size_t>()}};
      if (span.span.start >= span.span.end || span.label.empty()) {
        throw InvalidInput(where + ": invalid " + internal::DescribeSpan(key, span));
      }
      spans.push_back(std::move(span));
    }
    std::stable_sort(spans.begin(), spans.end(), [](const auto &a, const auto &b) {
      return a.span.start < b.span.start;
    });
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i - 1].span.Overlaps(spans[i].span)) {
        throw InvalidInput(where + ": overlapping " +
                           internal::DescribeSpan(key, spans[i]));
      }
    }
    if (!map.emplace(key, std::move(spans)).second) {
      throw InvalidInput(where + ": duplicate annotation for id \"" + key.first +
                         "\" field " + std::string(FieldName(key.second)));
    }
  }
  return map;
}

// Checks that every span lies inside and matches the text it annotates.
inline void ValidateAnnotations(const AnnotationMap &annotations, const Dataset &dataset) {
  std::unordered_map<std::string, const Pair *> by_id;
  for (const Pair &p : dataset.pairs) by_id.emplace(p.id, &p);
  for (const auto &[key, spans] : annotations) {
    auto it = by_id.find(key.first);
    if (it == by_id.end()) {
      throw InvalidInput("annotation for unknown id \"" + key.first + "\"");
    }
    auto text = GetField(*it->second, key.second);
    if (!text) {
      throw InvalidInput("annotation for id \"" + key.first + "\" names absent field " +
                         std::string(FieldName(key.second)));
    }
    const std::u32string t = unicode::Decode(*text);
    for (const EntitySpan &s : spans) {
      if (s.span.end > t.size()) {
        throw InvalidInput("offset out of range: " + internal::DescribeSpan(key, s));
      }
      if (Slice(t, s.span) != s.text) {
        throw InvalidInput("span text mismatch: " + internal::DescribeSpan(key, s) +
                           " but text has \"" + Slice(t, s.span) + "\"");
      }
    }
  }
}

inline AnnotationMap LoadExternalAnnotations(const std::string &path,
                                             const Dataset &dataset) {
  AnnotationMap map = LoadExternalAnnotations(path);
  ValidateAnnotations(map, dataset);
  return map;
}

// Where entity spans for a pair come from: the built-in extractor, or an
// external annotation map that must cover every requested (id, field).
class EntitySource {
 public:
  explicit EntitySource(NerOptions options = {}) : options_(options) {}
  EntitySource(AnnotationMap annotations, NerOptions options = {})
      : options_(options), annotations_(std::move(annotations)), external_(true) {}

  bool external() const { return external_; }
  const NerOptions &options() const { return options_; }

  std::vector<EntitySpan> Spans(const Pair &pair, TextField field) const {
    if (external_) {
      auto it = annotations_.find({pair.id, field});
      if (it == annotations_.end()) {
        throw InvalidInput("no annotations for id \"" + pair.id + "\" field " +
                           std::string(FieldName(field)));
      }
      return it->second;
    }
    auto text = GetField(pair, field);
    if (!text) {
      throw InvalidInput("id \"" + pair.id + "\" has no " + std::string(FieldName(field)));
    }
    return ExtractEntities(*text, options_);
  }

 private:
  NerOptions options_;
  AnnotationMap annotations_;
  bool external_ = false;
};

}  // namespace ecc
