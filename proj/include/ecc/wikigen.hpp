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

// Pseudo document/summary pairs from Wikipedia article text.
//
// For each article and target profile, the leading `summary_sents`
// sentences become the pseudo summary and the following `doc_sents`
// sentences the pseudo document. The pair is kept when the greedy
// extractive-oracle ROUGE-1 F of the document against the summary lies
// within `tolerance` of the profile's abstractiveness level.
//
// The dump is JSON lines of {"title": str, "text": str} holding plain text;
// residual wiki markup is scrubbed on read.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ecc/control.hpp"
#include "ecc/corpus.hpp"
#include "ecc/error.hpp"
#include "ecc/metrics.hpp"
#include "ecc/parallel.hpp"
#include "ecc/text.hpp"
#include "ecc/unicode.hpp"

namespace ecc {

struct TargetProfile {
  std::string name;
  std::size_t summary_sents = 1;
  std::size_t doc_sents = 1;
  double abstractiveness = 1.0;
  double tolerance = 0.05;
  std::size_t max_pairs = 0;  // 0 = no per-profile cap

  void Validate() const {
    if (name.empty() || !MatchesCodeGrammar("<" + name + ">")) {
      throw ParameterError("invalid profile name \"" + name + "\"");
    }
    if (summary_sents < 1 || doc_sents < 1) {
      throw ParameterError("profile " + name + ": sentence counts must be >= 1");
    }
    if (!(abstractiveness > 0.0 && abstractiveness <= 1.0)) {
      throw ParameterError("profile " + name + ": abstractiveness must be in (0, 1]");
    }
    if (!(tolerance >= 0.0)) {
      throw ParameterError("profile " + name + ": tolerance must be >= 0");
    }
  }

  // Absorbs rounding in the F computation; exact-band profiles (tolerance 0)
  // still accept a perfectly extractive 1.0.
  bool InBand(double score) const {
    return std::fabs(score - abstractiveness) <= tolerance + 1e-12;
  }
};

struct Article {
  std::string title;
  std::string text;
  std::size_t index = 0;  // position among well-formed records
};

// Removes {{templates}} (nested; an unclosed one runs to the end of text),
// unwraps [[target|label]] and [[target]] links, drops == headings == and
// lines starting with "==", collapses blank space and empty lines.
inline std::string ScrubMarkup(std::string_view text) {
  std::string no_templates;
  no_templates.reserve(text.size());
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text.compare(i, 2, "{{") == 0) {
      ++depth;
      ++i;
    } else if (text.compare(i, 2, "}}") == 0) {
      if (depth > 0) --depth;
      ++i;
    } else if (depth == 0) {
      no_templates.push_back(text[i]);
    }
  }

  std::string no_links;
  no_links.reserve(no_templates.size());
  for (std::size_t i = 0; i < no_templates.size(); ++i) {
    if (no_templates.compare(i, 2, "[[") == 0) {
      const std::size_t close = no_templates.find("]]", i + 2);
      if (close == std::string::npos) {
        ++i;
        continue;
      }
      std::string_view inner(no_templates.data() + i + 2, close - i - 2);
      if (inner.find("[[") == std::string_view::npos) {
        const std::size_t bar = inner.rfind('|');
        no_links += bar == std::string_view::npos ? inner : inner.substr(bar + 1);
        i = close + 1;
        continue;
      }
      ++i;  // nested opener: drop this "[[" and rescan
      continue;
    }
    if (no_templates.compare(i, 2, "]]") == 0) {
      ++i;
      continue;
    }
    no_links.push_back(no_templates[i]);
  }

  std::string out;
  std::size_t line_start = 0;
  while (line_start <= no_links.size()) {
    std::size_t line_end = no_links.find('\n', line_start);
    if (line_end == std::string::npos) line_end = no_links.size();
    std::string_view raw(no_links.data() + line_start, line_end - line_start);
    line_start = line_end + 1;

    const std::size_t first = raw.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || raw.compare(first, 2, "==") == 0) continue;

    // Inline "== Heading ==" segments.
    std::string line;
    for (std::size_t i = 0; i < raw.size();) {
      if (raw.compare(i, 2, "==") == 0) {
        std::size_t open_end = i;
        while (open_end < raw.size() && raw[open_end] == '=') ++open_end;
        const std::size_t close = raw.find("==", open_end);
        if (close != std::string_view::npos &&
            raw.substr(open_end, close - open_end).find('=') == std::string_view::npos) {
          std::size_t close_end = close;
          while (close_end < raw.size() && raw[close_end] == '=') ++close_end;
          line.push_back(' ');
          i = close_end;
          continue;
        }
      }
      line.push_back(raw[i]);
      ++i;
    }

    std::string collapsed;
    bool space = false;
    for (char c : line) {
      if (c == ' ' || c == '\t' || c == '\r') {
        space = true;
        continue;
      }
      if (space && !collapsed.empty()) collapsed.push_back(' ');
      space = false;
      collapsed.push_back(c);
    }
    if (collapsed.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += collapsed;
  }
  return out;
}

// Streams articles from a dump one line at a time. Malformed lines are
// counted and skipped.
class ArticleReader {
 public:
  explicit ArticleReader(const std::string &path) : path_(path), in_(path) {
    if (!in_) throw IoError(path + ": cannot open dump");
  }

  bool Next(Article &article) {
    std::string line;
    while (std::getline(in_, line)) {
      if (internal::IsBlank(line)) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (j.is_discarded() || !j.is_object() || !j.contains("title") ||
          !j["title"].is_string() || !j.contains("text") || !j["text"].is_string()) {
        ++malformed_;
        continue;
      }
      article.title = unicode::ToNfc(j["title"].get<std::string>());
      article.text = unicode::ToNfc(ScrubMarkup(j["text"].get<std::string>()));
      article.index = read_++;
      return true;
    }
    if (in_.bad()) throw IoError(path_ + ": read error");
    return false;
  }

  std::size_t read() const { return read_; }
  std::size_t malformed() const { return malformed_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t read_ = 0;
  std::size_t malformed_ = 0;
};

inline std::vector<Article> ReadArticles(const std::string &path,
                                         std::size_t *malformed = nullptr) {
  ArticleReader reader(path);
  std::vector<Article> out;
  Article a;
  while (reader.Next(a)) out.push_back(a);
  if (malformed) *malformed = reader.malformed();
  return out;
}

struct PseudoPairCandidate {
  std::string pseudo_summary;
  std::string pseudo_document;
  std::vector<std::string> summary_tokens;               // normalized
  std::vector<std::vector<std::string>> document_sentences;  // normalized
};

inline std::optional<PseudoPairCandidate> MakePseudoPair(
    std::string_view article_text, const TargetProfile &profile,
    const AbbreviationList &abbreviations = AbbreviationList::Builtin()) {
  const std::u32string t = unicode::Decode(article_text);
  const auto sentences = internal::SplitSentences(t, abbreviations);
  const std::size_t n = profile.summary_sents, m = profile.doc_sents;
  if (sentences.size() < n + m) return std::nullopt;
  PseudoPairCandidate c;
  c.pseudo_summary = Slice(t, {sentences[0].span.start, sentences[n - 1].span.end});
  c.pseudo_document = Slice(t, {sentences[n].span.start, sentences[n + m - 1].span.end});
  for (std::size_t i = 0; i < n; ++i) {
    for (auto &tok : NormalizedTokens(sentences[i].tokens)) {
      c.summary_tokens.push_back(std::move(tok));
    }
  }
  for (std::size_t i = n; i < n + m; ++i) {
    c.document_sentences.push_back(NormalizedTokens(sentences[i].tokens));
  }
  return c;
}

struct OracleResult {
  double score = 0.0;
  std::vector<std::size_t> selected;  // ascending sentence indices
};

// Greedy extractive oracle: repeatedly add the sentence that most improves
// ROUGE-1 F of the selection against the summary (lowest index on ties);
// stop when nothing improves.
inline OracleResult ExtractiveOracleRouge1(
    const std::vector<std::vector<std::string>> &sentences,
    const std::vector<std::string> &summary_tokens) {
  OracleResult result;
  std::vector<bool> used(sentences.size(), false);
  std::vector<std::string> selection;
  while (true) {
    double best = result.score;
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (used[i]) continue;
      std::vector<std::string> trial = selection;
      trial.insert(trial.end(), sentences[i].begin(), sentences[i].end());
      const double f = RougeN(trial, summary_tokens, 1).f1;
      if (f > best) {
        best = f;
        pick = i;
      }
    }
    if (!pick) break;
    used[*pick] = true;
    selection.insert(selection.end(), sentences[*pick].begin(), sentences[*pick].end());
    result.selected.push_back(*pick);
    result.score = best;
  }
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

inline OracleResult ExtractiveOracleRouge1(const std::vector<Sentence> &sentences,
                                           const std::vector<std::string> &summary_tokens) {
  std::vector<std::vector<std::string>> normalized;
  normalized.reserve(sentences.size());
  for (const Sentence &s : sentences) normalized.push_back(NormalizedTokens(s.tokens));
  return ExtractiveOracleRouge1(normalized, summary_tokens);
}

struct PseudoPair {
  std::string article_title;
  std::string pseudo_summary;
  std::string pseudo_document;
  double oracle_score = 0.0;
  std::string profile_name;
  std::size_t article_index = 0;
};

struct ProfileReport {
  std::string name;
  std::size_t candidates = 0;   // articles long enough for the profile
  std::size_t kept = 0;
  std::size_t too_short = 0;
  std::size_t out_of_band = 0;
  std::size_t over_cap = 0;     // in band, but the profile was already full
};

struct GenerationReport {
  std::size_t articles_read = 0;
  std::size_t malformed_lines = 0;
  std::vector<ProfileReport> profiles;
  std::vector<std::string> warnings;
};

inline nlohmann::ordered_json ToJson(const GenerationReport &r) {
  nlohmann::ordered_json j;
  j["articles_read"] = r.articles_read;
  j["malformed_lines"] = r.malformed_lines;
  j["profiles"] = nlohmann::ordered_json::array();
  for (const auto &p : r.profiles) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["candidates"] = p.candidates;
    pj["kept"] = p.kept;
    pj["skipped"] = {{"too_short", p.too_short},
                     {"out_of_band", p.out_of_band},
                     {"over_cap", p.over_cap}};
    j["profiles"].push_back(std::move(pj));
  }
  j["warnings"] = r.warnings;
  return j;
}

struct GenerationOptions {
  std::size_t max_per_profile = 0;  // used for profiles with max_pairs == 0
  unsigned jobs = 1;
  std::size_t batch_size = 256;
  const AbbreviationList *abbreviations = &AbbreviationList::Builtin();
};

struct IntermediateCorpus {
  Dataset dataset;
  std::vector<PseudoPair> pairs;
  GenerationReport report;
};

namespace internal {

enum class Outcome { kTooShort, kOutOfBand, kInBand };

struct Evaluation {
  Outcome outcome = Outcome::kTooShort;
  std::optional<PseudoPair> pair;
};

inline Evaluation EvaluateArticle(const Article &article, const TargetProfile &profile,
                                  const AbbreviationList &abbreviations) {
  Evaluation e;
  auto candidate = MakePseudoPair(article.text, profile, abbreviations);
  if (!candidate) return e;
  const double score =
      ExtractiveOracleRouge1(candidate->document_sentences, candidate->summary_tokens).score;
  if (!profile.InBand(score)) {
    e.outcome = Outcome::kOutOfBand;
    return e;
  }
  e.outcome = Outcome::kInBand;
  e.pair = PseudoPair{article.title, std::move(candidate->pseudo_summary),
                      std::move(candidate->pseudo_document), score, profile.name,
                      article.index};
  return e;
}

}  // namespace internal

// Output order is (profile order, article stream order) whatever the job
// count. Reading stops once every profile is full.
inline IntermediateCorpus BuildIntermediateCorpus(const std::string &dump_path,
                                                  const std::vector<TargetProfile> &profiles,
                                                  const GenerationOptions &options = {}) {
  if (profiles.empty()) throw ParameterError("at least one target profile is required");
  std::vector<std::string> names;
  for (const auto &p : profiles) {
    p.Validate();
    if (std::find(names.begin(), names.end(), p.name) != names.end()) {
      throw ParameterError("duplicate profile name \"" + p.name + "\"");
    }
    names.push_back(p.name);
  }
  const CodeVocabulary vocab = MakeCodeVocab(3, names);
  const AbbreviationList &abbreviations =
      options.abbreviations ? *options.abbreviations : AbbreviationList::Builtin();

  std::vector<std::size_t> caps;
  for (const auto &p : profiles) {
    caps.push_back(p.max_pairs ? p.max_pairs : options.max_per_profile);
  }
  auto full = [&](std::size_t p, const std::vector<std::vector<PseudoPair>> &kept) {
    return caps[p] != 0 && kept[p].size() >= caps[p];
  };

  IntermediateCorpus out;
  out.report.profiles.resize(profiles.size());
  for (std::size_t p = 0; p < profiles.size(); ++p) out.report.profiles[p].name = profiles[p].name;
  std::vector<std::vector<PseudoPair>> kept(profiles.size());

  ArticleReader reader(dump_path);
  bool done = false;
  std::vector<Article> batch;
  while (!done) {
    batch.clear();
    Article a;
    while (batch.size() < std::max<std::size_t>(1, options.batch_size) && reader.Next(a)) {
      batch.push_back(std::move(a));
    }
    if (batch.empty()) break;
    const auto results = ParallelMap(batch.size(), options.jobs, [&](std::size_t i) {
      std::vector<internal::Evaluation> per_profile;
      per_profile.reserve(profiles.size());
      for (const auto &profile : profiles) {
        per_profile.push_back(internal::EvaluateArticle(batch[i], profile, abbreviations));
      }
      return per_profile;
    });
    for (std::size_t i = 0; i < batch.size() && !done; ++i) {
      ++out.report.articles_read;
      for (std::size_t p = 0; p < profiles.size(); ++p) {
        ProfileReport &r = out.report.profiles[p];
        const auto &e = results[i][p];
        if (e.outcome == internal::Outcome::kTooShort) {
          ++r.too_short;
          continue;
        }
        ++r.candidates;
        if (e.outcome == internal::Outcome::kOutOfBand) {
          ++r.out_of_band;
        } else if (full(p, kept)) {
          ++r.over_cap;
        } else {
          kept[p].push_back(*e.pair);
        }
      }
      done = true;
      for (std::size_t p = 0; p < profiles.size() && done; ++p) done = full(p, kept);
    }
  }
  out.report.malformed_lines = reader.malformed();

  out.dataset.name = "intermediate";
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    out.report.profiles[p].kept = kept[p].size();
    if (kept[p].empty()) {
      out.report.warnings.push_back("profile " + profiles[p].name + " kept no pairs");
    }
    const ControlCode &code = vocab.targets()[p];
    for (PseudoPair &pp : kept[p]) {
      Pair pair;
      pair.id = pp.profile_name + "-" + std::to_string(pp.article_index);
      pair.document = PrependCodes(pp.pseudo_document, {code});
      pair.reference_summary = pp.pseudo_summary;
      pair.codes = {code.token()};
      pair.meta["article_index"] = std::to_string(pp.article_index);
      pair.meta["oracle_rouge1"] = internal::FormatScore(pp.oracle_score);
      pair.meta["profile"] = pp.profile_name;
      pair.meta["title"] = pp.article_title;
      out.dataset.pairs.push_back(std::move(pair));
      out.pairs.push_back(std::move(pp));
    }
  }
  return out;
}

}  // namespace ecc
