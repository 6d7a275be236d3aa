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

#pragma once

#include <algorithm>
#include <utility>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ecc/error.hpp"
#include "ecc/ner.hpp"
#include "ecc/text.hpp"

namespace ecc {

enum class MatchMode {
  kStrictSet,   // |N(h) ∩ N(s)| / |N(h)|
  kSourceText,  // also covered when the form occurs in the source tokens
};

inline std::string_view MatchModeName(MatchMode mode) {
  return mode == MatchMode::kStrictSet ? "strict-set" : "source-text";
}

inline MatchMode ParseMatchMode(std::string_view name) {
  if (name == "strict-set") return MatchMode::kStrictSet;
  if (name == "source-text") return MatchMode::kSourceText;
  throw ParameterError("unknown matching mode \"" + std::string(name) +
                       "\" (expected strict-set or source-text)");
}

struct PrecisionResult {
  double value = 1.0;
  std::size_t hypothesis_entity_count = 0;
  std::size_t covered_count = 0;
  bool vacuous = true;  // no hypothesis entities; value is 1.0 by convention

  bool operator==(const PrecisionResult &) const = default;
};

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore FromCounts(std::size_t matches, std::size_t hyp_total,
                               std::size_t ref_total) {
    RougeScore s;
    s.precision = hyp_total ? static_cast<double>(matches) / hyp_total : 0.0;
    s.recall = ref_total ? static_cast<double>(matches) / ref_total : 0.0;
    const double sum = s.precision + s.recall;
    s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    return s;
  }

  bool operator==(const RougeScore &) const = default;
};

// Token key for source-text matching: normalized, possessive 's removed.
inline std::string MatchKey(std::string_view token_text) {
  std::u32string n = internal::NormalizeToken(unicode::Decode(token_text));
  if (n.size() > 2 && n.back() == U's' && internal::IsApostrophe(n[n.size() - 2])) {
    n.resize(n.size() - 2);
  }
  return unicode::Encode(n);
}

inline std::vector<std::string> MatchKeys(std::string_view text) {
  std::vector<std::string> keys;
  for (const Token &tok : Tokenize(text)) {
    std::string k = MatchKey(tok.text);
    if (!k.empty()) keys.push_back(std::move(k));
  }
  return keys;
}

// Normalized source token stream with an index for phrase lookup.
class SourceIndex {
 public:
  explicit SourceIndex(std::string_view source_text) : keys_(MatchKeys(source_text)) {
    for (std::size_t i = 0; i < keys_.size(); ++i) positions_[keys_[i]].push_back(i);
  }

  // True when `form` occurs as a contiguous run of whole source tokens.
  bool ContainsForm(std::string_view form) const {
    const std::vector<std::string> words = MatchKeys(form);
    if (words.empty()) return false;
    auto it = positions_.find(words.front());
    if (it == positions_.end()) return false;
    for (std::size_t start : it->second) {
      if (start + words.size() > keys_.size()) break;
      if (std::equal(words.begin(), words.end(), keys_.begin() + start)) return true;
    }
    return false;
  }

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::vector<std::size_t>> positions_;
};

inline PrecisionResult EntityPrecision(const EntitySet &hyp_entities,
                                       const SourceIndex &source,
                                       const EntitySet &source_entities,
                                       MatchMode mode = MatchMode::kSourceText) {
  PrecisionResult r;
  r.hypothesis_entity_count = hyp_entities.size();
  if (r.hypothesis_entity_count == 0) return r;
  for (const std::string &form : hyp_entities.forms) {
    const bool covered =
        source_entities.Contains(form) ||
        (mode == MatchMode::kSourceText && source.ContainsForm(form));
    if (covered) ++r.covered_count;
  }
  r.vacuous = false;
  r.value = static_cast<double>(r.covered_count) / r.hypothesis_entity_count;
  return r;
}

inline PrecisionResult EntityPrecision(const EntitySet &hyp_entities,
                                       std::string_view source_text,
                                       const EntitySet &source_entities,
                                       MatchMode mode = MatchMode::kSourceText) {
  if (mode == MatchMode::kStrictSet) {
    return EntityPrecision(hyp_entities, SourceIndex(""), source_entities, mode);
  }
  return EntityPrecision(hyp_entities, SourceIndex(source_text), source_entities, mode);
}

namespace internal {

// Maps the tokens of two sequences to dense integer ids shared by both.
inline std::pair<std::vector<int>, std::vector<int>> InternPair(
    const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::vector<int> ia(a.size()), ib(b.size());
  if (a.size() + b.size() <= 64) {
    std::vector<std::string_view> seen;
    auto id_of = [&](std::string_view t) {
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] == t) return static_cast<int>(i);
      }
      seen.push_back(t);
      return static_cast<int>(seen.size() - 1);
    };
    for (std::size_t i = 0; i < a.size(); ++i) ia[i] = id_of(a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) ib[i] = id_of(b[i]);
    return {std::move(ia), std::move(ib)};
  }
  std::unordered_map<std::string_view, int> ids;
  auto id_of = [&](std::string_view t) {
    return ids.emplace(t, static_cast<int>(ids.size())).first->second;
  };
  for (std::size_t i = 0; i < a.size(); ++i) ia[i] = id_of(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) ib[i] = id_of(b[i]);
  return {std::move(ia), std::move(ib)};
}

// Start offsets of every n-gram, sorted so equal grams are adjacent.
inline std::vector<std::size_t> SortedGramStarts(const std::vector<int> &seq, std::size_t n) {
  std::vector<std::size_t> starts;
  if (seq.size() < n) return starts;
  starts.resize(seq.size() - n + 1);
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = i;
  std::sort(starts.begin(), starts.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(seq.begin() + a, seq.begin() + a + n, seq.begin() + b,
                                        seq.begin() + b + n);
  });
  return starts;
}

// Sum over distinct n-grams of min(count in a, count in b).
inline std::size_t ClippedMatches(const std::vector<int> &a, const std::vector<int> &b,
                                  std::size_t n) {
  const auto sa = SortedGramStarts(a, n);
  const auto sb = SortedGramStarts(b, n);
  // -1, 0, 1 ordering of gram x in a against gram y in b.
  auto cmp = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a[x + i] != b[y + i]) return a[x + i] < b[y + i] ? -1 : 1;
    }
    return 0;
  };
  std::size_t matches = 0, i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    const int c = cmp(sa[i], sb[j]);
    if (c < 0) {
      ++i;
    } else if (c > 0) {
      ++j;
    } else {
      std::size_t ri = i + 1, rj = j + 1;
      while (ri < sa.size() && cmp(sa[ri], sb[j]) == 0) ++ri;
      while (rj < sb.size() && cmp(sa[i], sb[rj]) == 0) ++rj;
      matches += std::min(ri - i, rj - j);
      i = ri;
      j = rj;
    }
  }
  return matches;
}

inline std::size_t LcsLength(const std::vector<int> &a, const std::vector<int> &b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace internal

// ROUGE-N with clipped (multiset) n-gram matches.
inline RougeScore RougeN(const std::vector<std::string> &hyp_tokens,
                         const std::vector<std::string> &ref_tokens, std::size_t n) {
  if (n == 0) throw ParameterError("ROUGE-N requires n >= 1");
  const auto [hyp, ref] = internal::InternPair(hyp_tokens, ref_tokens);
  const std::size_t hyp_total = hyp_tokens.size() >= n ? hyp_tokens.size() - n + 1 : 0;
  const std::size_t ref_total = ref_tokens.size() >= n ? ref_tokens.size() - n + 1 : 0;
  return RougeScore::FromCounts(internal::ClippedMatches(hyp, ref, n), hyp_total, ref_total);
}

// Summary-level ROUGE-L: one LCS over the whole token sequences.
inline RougeScore RougeL(const std::vector<std::string> &hyp_tokens,
                         const std::vector<std::string> &ref_tokens) {
  const auto [hyp, ref] = internal::InternPair(hyp_tokens, ref_tokens);
  return RougeScore::FromCounts(internal::LcsLength(hyp, ref), hyp.size(), ref.size());
}

// Number of extracted mentions, not distinct forms.
inline std::size_t EntityCount(std::string_view text, const NerOptions &options = {}) {
  return ExtractEntities(text, options).size();
}

}  // namespace ecc
