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

// Faithfulness binning and control-code handling.
//
// Bins are lower-inclusive: with cuts c_1 < ... < c_{k-1},
//   bin 0 = [0, c_1),  bin j = [c_j, c_{j+1}),  bin k-1 = [c_{k-1}, 1].
//
// A coded document is its codes joined by single spaces, one more space,
// then the plain document. Faithfulness codes always precede target codes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ecc/control_code.hpp"
#include "ecc/corpus.hpp"
#include "ecc/error.hpp"
#include "ecc/metrics.hpp"
#include "ecc/ner.hpp"
#include "ecc/parallel.hpp"

namespace ecc {

class BinBoundaries {
 public:
  // Validates user-supplied cuts: non-empty, strictly ascending, each in
  // (0, 1]. A cut of exactly 1.0 makes the top bin hold perfect scores only.
  static BinBoundaries FromCuts(std::vector<double> cuts) {
    if (cuts.empty()) throw ParameterError("bin boundaries need at least one cut");
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      if (!(cuts[i] > 0.0 && cuts[i] <= 1.0)) {
        throw ParameterError("cut " + std::to_string(cuts[i]) + " outside (0, 1]");
      }
      if (i > 0 && !(cuts[i] > cuts[i - 1])) {
        throw ParameterError("cuts must be strictly ascending");
      }
    }
    BinBoundaries b;
    b.cuts_ = std::move(cuts);
    return b;
  }

  int k() const { return static_cast<int>(cuts_.size()) + 1; }
  const std::vector<double> &cuts() const { return cuts_; }

  bool operator==(const BinBoundaries &) const = default;

 private:
  std::vector<double> cuts_;
};

namespace internal {

inline void CheckScore(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ParameterError("score " + std::to_string(score) + " outside [0, 1]");
  }
}

}  // namespace internal

// Rank-statistic cuts: sort ascending and take cut j at 0-based rank
// floor(j * N / k). A cut that does not exceed its predecessor (the minimum
// score, for the first cut) moves up to the next larger distinct score, so
// no bin is ever empty. Fails only when there are fewer than k distinct
// scores.
inline BinBoundaries ComputeBalancedBoundaries(std::vector<double> scores, int k) {
  if (k < 2) throw ParameterError("k must be at least 2, got " + std::to_string(k));
  for (double s : scores) internal::CheckScore(s);
  std::sort(scores.begin(), scores.end());
  const std::size_t n = scores.size();
  const auto degenerate = [&] {
    const std::size_t distinct = static_cast<std::size_t>(
        std::unique(scores.begin(), scores.end()) - scores.begin());
    return DegenerateError("degenerate score distribution: " + std::to_string(n) +
                           " scores with " + std::to_string(distinct) +
                           " distinct values cannot fill " + std::to_string(k) + " bins");
  };
  if (n < static_cast<std::size_t>(k)) throw degenerate();

  std::vector<double> distinct = scores;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < static_cast<std::size_t>(k)) throw degenerate();

  // Work on indices into the distinct values. The forward pass advances
  // colliding cuts; the backward pass pulls cuts down when advancing ran
  // past the largest value (heavy ties at the top).
  const std::size_t cut_count = static_cast<std::size_t>(k) - 1;
  std::vector<std::size_t> idx(cut_count);
  std::size_t prev = 0;
  for (std::size_t j = 0; j < cut_count; ++j) {
    const double at_rank = scores[(j + 1) * n / static_cast<std::size_t>(k)];
    const auto pos = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), at_rank) - distinct.begin());
    idx[j] = std::max(pos, prev + 1);
    prev = idx[j];
  }
  std::size_t ceiling = distinct.size();
  for (std::size_t j = cut_count; j-- > 0;) {
    idx[j] = std::min(idx[j], ceiling - 1);
    ceiling = idx[j];
  }
  std::vector<double> cuts;
  cuts.reserve(cut_count);
  for (std::size_t i : idx) cuts.push_back(distinct[i]);
  return BinBoundaries::FromCuts(std::move(cuts));
}

inline std::size_t AssignBin(double score, const BinBoundaries &boundaries) {
  internal::CheckScore(score);
  const auto &cuts = boundaries.cuts();
  return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), score) -
                                  cuts.begin());
}

// The registered control codes: k faithfulness codes ordered lowest bin
// first, then any target codes.
class CodeVocabulary {
 public:
  const std::vector<ControlCode> &faithfulness() const { return faithfulness_; }
  const std::vector<ControlCode> &targets() const { return targets_; }
  int k() const { return static_cast<int>(faithfulness_.size()); }

  const ControlCode *Find(std::string_view token) const {
    for (const auto *list : {&faithfulness_, &targets_}) {
      for (const ControlCode &c : *list) {
        if (c.token() == token) return &c;
      }
    }
    return nullptr;
  }
  bool Contains(std::string_view token) const { return Find(token) != nullptr; }

  std::vector<std::string> Tokens() const {
    std::vector<std::string> out;
    for (const auto &c : faithfulness_) out.push_back(c.token());
    for (const auto &c : targets_) out.push_back(c.token());
    return out;
  }

  // Registers <T-name> unless already present.
  const ControlCode &AddTarget(std::string_view name) {
    ControlCode code = ControlCode::Parse("T-" + std::string(name));
    if (const ControlCode *existing = Find(code.token())) return *existing;
    targets_.push_back(std::move(code));
    return targets_.back();
  }

  // Registers any grammar-valid code token, e.g. one found on a record.
  void AddToken(std::string_view token) {
    ControlCode code = ControlCode::Parse(token);
    if (Contains(code.token())) return;
    (code.kind() == CodeKind::kTarget ? targets_ : extra_faithfulness_)
        .push_back(std::move(code));
  }

  bool IsStrippable(std::string_view token) const {
    if (Contains(token)) return true;
    return std::any_of(extra_faithfulness_.begin(), extra_faithfulness_.end(),
                       [&](const ControlCode &c) { return c.token() == token; });
  }

 private:
  friend CodeVocabulary MakeCodeVocab(int, const std::vector<std::string> &,
                                      const std::vector<std::string> &);

  std::vector<ControlCode> faithfulness_;
  std::vector<ControlCode> targets_;
  // Faithfulness-kind tokens seen on records but outside the k-code ladder;
  // recognized when stripping only.
  std::vector<ControlCode> extra_faithfulness_;
};

// k == 3 gives <FF-low> <FF-mid> <FF-high>; other k give <FF-0> .. <FF-{k-1}>.
// `faithfulness_names` optionally overrides the ladder (k FF-* names).
inline CodeVocabulary MakeCodeVocab(int k, const std::vector<std::string> &target_names = {},
                                    const std::vector<std::string> &faithfulness_names = {}) {
  if (k < 2) throw ParameterError("k must be at least 2, got " + std::to_string(k));
  CodeVocabulary vocab;
  if (!faithfulness_names.empty()) {
    if (faithfulness_names.size() != static_cast<std::size_t>(k)) {
      throw ParameterError("expected " + std::to_string(k) + " faithfulness code names, got " +
                           std::to_string(faithfulness_names.size()));
    }
    for (const auto &name : faithfulness_names) {
      ControlCode code = ControlCode::Parse(name);
      if (code.kind() != CodeKind::kFaithfulness) {
        throw ParameterError("faithfulness code " + code.token() + " must start with FF-");
      }
      if (vocab.Contains(code.token())) {
        throw ParameterError("duplicate control code " + code.token());
      }
      vocab.faithfulness_.push_back(std::move(code));
    }
  } else if (k == 3) {
    for (const char *name : {"FF-low", "FF-mid", "FF-high"}) {
      vocab.faithfulness_.push_back(ControlCode::Parse(name));
    }
  } else {
    for (int i = 0; i < k; ++i) {
      vocab.faithfulness_.push_back(ControlCode::Parse("FF-" + std::to_string(i)));
    }
  }
  for (const auto &name : target_names) {
    if (name.empty() || !MatchesCodeGrammar("<" + name + ">")) {
      throw ParameterError("invalid target name \"" + name + "\"");
    }
    ControlCode code = ControlCode::Parse("T-" + name);
    if (vocab.Contains(code.token())) {
      throw ParameterError("duplicate target name \"" + name + "\"");
    }
    vocab.targets_.push_back(std::move(code));
  }
  return vocab;
}

// Faithfulness codes first, then targets; relative order kept, duplicates
// dropped.
inline std::vector<ControlCode> CanonicalizeCodes(const std::vector<ControlCode> &codes) {
  std::vector<ControlCode> out;
  for (CodeKind kind : {CodeKind::kFaithfulness, CodeKind::kTarget}) {
    for (const ControlCode &c : codes) {
      if (c.kind() == kind && std::find(out.begin(), out.end(), c) == out.end()) {
        out.push_back(c);
      }
    }
  }
  return out;
}

inline std::string PrependCodes(std::string_view document,
                                const std::vector<ControlCode> &codes) {
  bool seen_target = false;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i].kind() == CodeKind::kTarget) {
      seen_target = true;
    } else if (seen_target) {
      throw ParameterError("control codes out of canonical order: " + codes[i].token() +
                           " follows a target code");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (codes[j] == codes[i]) {
        throw ParameterError("duplicate control code " + codes[i].token());
      }
    }
  }
  std::string out;
  for (const ControlCode &c : codes) {
    out += c.token();
    out += ' ';
  }
  out += document;
  return out;
}

struct StrippedText {
  std::vector<ControlCode> codes;
  std::string document;
};

// Consumes leading vocabulary tokens, each followed by exactly one space or
// the end of text. Anything else, including unregistered "<...>" tokens,
// stays in the document.
inline StrippedText StripCodes(std::string_view text, const CodeVocabulary &vocab) {
  StrippedText out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    if (!vocab.IsStrippable(token)) break;
    out.codes.push_back(ControlCode::Parse(token));
    pos = end == text.size() ? end : end + 1;
  }
  out.document = std::string(text.substr(pos));
  return out;
}

namespace internal {

inline std::vector<ControlCode> ParseCodes(const std::vector<std::string> &tokens) {
  std::vector<ControlCode> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(ControlCode::Parse(t));
  return out;
}

inline std::vector<std::string> CodeTokens(const std::vector<ControlCode> &codes) {
  std::vector<std::string> out;
  out.reserve(codes.size());
  for (const auto &c : codes) out.push_back(c.token());
  return out;
}

// Plain document of a pair plus the union of its recorded and prefixed codes.
inline StrippedText SplitPair(const Pair &pair, const CodeVocabulary &vocab) {
  CodeVocabulary local = vocab;
  for (const auto &t : pair.codes) local.AddToken(t);
  StrippedText s = StripCodes(pair.document, local);
  std::vector<ControlCode> all = ParseCodes(pair.codes);
  all.insert(all.end(), s.codes.begin(), s.codes.end());
  s.codes = CanonicalizeCodes(all);
  return s;
}

inline std::string FormatScore(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace internal

// Moves leading codes out of every document into the codes field.
inline Dataset StripDataset(const Dataset &dataset, const CodeVocabulary &vocab) {
  Dataset out = dataset;
  for (Pair &pair : out.pairs) {
    StrippedText s = internal::SplitPair(pair, vocab);
    pair.document = std::move(s.document);
    pair.codes = internal::CodeTokens(s.codes);
  }
  return out;
}

struct TrainingOptions {
  int k = 3;
  std::optional<BinBoundaries> fixed_cuts;
  MatchMode mode = MatchMode::kSourceText;
  unsigned jobs = 1;
};

struct TrainingSet {
  Dataset dataset;
  BinBoundaries boundaries;
  std::vector<std::size_t> bin_counts;
  std::vector<std::string> code_tokens;  // faithfulness ladder, lowest first
};

inline nlohmann::ordered_json BoundaryReport(const TrainingSet &t) {
  nlohmann::ordered_json j;
  j["k"] = t.boundaries.k();
  j["cuts"] = t.boundaries.cuts();
  j["bin_counts"] = t.bin_counts;
  j["code_tokens"] = t.code_tokens;
  return j;
}

// Entity coverage precision of the reference summary against its document,
// binned, with the bin's faithfulness code attached to every pair. Target
// codes already on a pair are kept; a previous faithfulness code is
// replaced. Pair count and order never change.
inline TrainingSet PrepareTrainingSet(const Dataset &dataset, const EntitySource &source,
                                      const CodeVocabulary &vocab,
                                      const TrainingOptions &options = {}) {
  const int k = options.fixed_cuts ? options.fixed_cuts->k() : options.k;
  if (vocab.k() != k) {
    throw ParameterError("vocabulary has " + std::to_string(vocab.k()) +
                         " faithfulness codes but binning uses k=" + std::to_string(k));
  }
  std::string missing;
  for (const Pair &p : dataset.pairs) {
    if (!p.reference_summary) missing += (missing.empty() ? "" : ", ") + p.id;
  }
  if (!missing.empty()) throw InvalidInput("missing reference_summary for ids: " + missing);

  struct Scored {
    StrippedText split;
    double precision;
  };
  const auto scored = ParallelMap(dataset.pairs.size(), options.jobs, [&](std::size_t i) {
    const Pair &pair = dataset.pairs[i];
    Scored s{internal::SplitPair(pair, vocab), 0.0};
    Pair plain = pair;
    plain.document = s.split.document;
    const EntitySet summary = MakeEntitySet(source.Spans(plain, TextField::kReferenceSummary));
    const EntitySet doc = MakeEntitySet(source.Spans(plain, TextField::kDocument));
    s.precision = EntityPrecision(summary, plain.document, doc, options.mode).value;
    return s;
  });

  TrainingSet out;
  if (options.fixed_cuts) {
    out.boundaries = *options.fixed_cuts;
  } else {
    std::vector<double> scores;
    scores.reserve(scored.size());
    for (const auto &s : scored) scores.push_back(s.precision);
    out.boundaries = ComputeBalancedBoundaries(std::move(scores), k);
  }
  out.bin_counts.assign(static_cast<std::size_t>(k), 0);
  out.code_tokens = internal::CodeTokens(vocab.faithfulness());
  out.dataset.name = dataset.name;
  out.dataset.pairs.reserve(dataset.pairs.size());
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    const std::size_t bin = AssignBin(scored[i].precision, out.boundaries);
    ++out.bin_counts[bin];
    std::vector<ControlCode> codes{vocab.faithfulness()[bin]};
    for (const ControlCode &c : scored[i].split.codes) {
      if (c.kind() == CodeKind::kTarget) codes.push_back(c);
    }
    codes = CanonicalizeCodes(codes);
    Pair pair = dataset.pairs[i];
    pair.document = PrependCodes(scored[i].split.document, codes);
    pair.codes = internal::CodeTokens(codes);
    pair.meta["entity_precision"] = internal::FormatScore(scored[i].precision);
    out.dataset.pairs.push_back(std::move(pair));
  }
  return out;
}

// Attaches the same code (and optional target code) to every document,
// replacing any codes already present.
inline Dataset PrepareInferenceSet(const Dataset &dataset, const CodeVocabulary &vocab,
                                   const ControlCode &code,
                                   const std::optional<ControlCode> &extra = std::nullopt) {
  if (code.kind() != CodeKind::kFaithfulness || !vocab.Contains(code.token())) {
    throw ParameterError("unknown faithfulness code " + code.token());
  }
  std::vector<ControlCode> codes{code};
  if (extra) {
    if (extra->kind() != CodeKind::kTarget || !vocab.Contains(extra->token())) {
      throw ParameterError("unknown target code " + extra->token());
    }
    codes.push_back(*extra);
  }
  Dataset out = dataset;
  for (Pair &pair : out.pairs) {
    StrippedText s = internal::SplitPair(pair, vocab);
    pair.document = PrependCodes(s.document, codes);
    pair.codes = internal::CodeTokens(codes);
  }
  return out;
}

}  // namespace ecc
