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

// Batch scoring: entity precision of each hypothesis against its source
// document, ROUGE-1/2/L F of each hypothesis against its reference, and the
// hypothesis entity-count distribution. Aggregates are means over pairs,
// expressed as percentages and displayed to two decimals.

#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ecc/control.hpp"
#include "ecc/corpus.hpp"
#include "ecc/error.hpp"
#include "ecc/metrics.hpp"
#include "ecc/ner.hpp"
#include "ecc/parallel.hpp"

namespace ecc {

struct PairScore {
  std::string id;
  PrecisionResult entity_precision;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
  std::size_t entity_count = 0;
};

// Percentages, unrounded.
struct Aggregates {
  double entity_precision = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  std::size_t vacuous_count = 0;
  std::size_t pair_count = 0;
};

struct ScoreReport {
  std::vector<PairScore> per_pair;
  Aggregates aggregates;
};

inline double RoundTo(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

// Sums in row order so the result does not depend on how rows were computed.
inline Aggregates Aggregate(const std::vector<PairScore> &rows) {
  Aggregates a;
  a.pair_count = rows.size();
  if (rows.empty()) return a;
  for (const PairScore &r : rows) {
    a.entity_precision += r.entity_precision.value;
    a.rouge1 += r.rouge1.f1;
    a.rouge2 += r.rouge2.f1;
    a.rougeL += r.rougeL.f1;
    if (r.entity_precision.vacuous) ++a.vacuous_count;
  }
  const double n = static_cast<double>(rows.size());
  a.entity_precision = 100.0 * a.entity_precision / n;
  a.rouge1 = 100.0 * a.rouge1 / n;
  a.rouge2 = 100.0 * a.rouge2 / n;
  a.rougeL = 100.0 * a.rougeL / n;
  return a;
}

struct ScoreOptions {
  MatchMode mode = MatchMode::kSourceText;
  unsigned jobs = 1;
};

// Leading control codes are removed from documents before scoring.
inline ScoreReport ScoreOutputs(const Dataset &dataset, const EntitySource &source,
                                const CodeVocabulary &vocab, const ScoreOptions &options = {}) {
  std::string missing;
  for (const Pair &p : dataset.pairs) {
    if (!p.reference_summary || !p.hypothesis) {
      missing += (missing.empty() ? "" : ", ") + p.id;
    }
  }
  if (!missing.empty()) {
    throw InvalidInput("missing reference_summary or hypothesis for ids: " + missing);
  }

  ScoreReport report;
  report.per_pair = ParallelMap(dataset.pairs.size(), options.jobs, [&](std::size_t i) {
    Pair plain = dataset.pairs[i];
    plain.document = internal::SplitPair(plain, vocab).document;
    const auto hyp_spans = source.Spans(plain, TextField::kHypothesis);
    const EntitySet hyp = MakeEntitySet(hyp_spans);
    const EntitySet doc = MakeEntitySet(source.Spans(plain, TextField::kDocument));
    const auto hyp_tokens = NormalizedTokens(*plain.hypothesis);
    const auto ref_tokens = NormalizedTokens(*plain.reference_summary);
    PairScore row;
    row.id = plain.id;
    row.entity_precision = EntityPrecision(hyp, plain.document, doc, options.mode);
    row.rouge1 = RougeN(hyp_tokens, ref_tokens, 1);
    row.rouge2 = RougeN(hyp_tokens, ref_tokens, 2);
    row.rougeL = RougeL(hyp_tokens, ref_tokens);
    row.entity_count = hyp_spans.size();
    return row;
  });
  report.aggregates = Aggregate(report.per_pair);
  return report;
}

struct Histogram {
  std::map<std::size_t, std::size_t> counts;  // entity count -> frequency
  std::size_t total = 0;
  std::optional<double> mean;                 // absent for no texts
};

inline Histogram HistogramFromCounts(const std::vector<std::size_t> &counts) {
  Histogram h;
  double sum = 0.0;
  for (std::size_t c : counts) {
    ++h.counts[c];
    sum += static_cast<double>(c);
  }
  h.total = counts.size();
  if (!counts.empty()) h.mean = sum / static_cast<double>(counts.size());
  return h;
}

inline Histogram EntityCountHistogram(const std::vector<std::string> &texts,
                                      const NerOptions &options = {}) {
  std::vector<std::size_t> counts;
  counts.reserve(texts.size());
  for (const auto &t : texts) counts.push_back(EntityCount(t, options));
  return HistogramFromCounts(counts);
}

struct PairDelta {
  std::string id;
  double entity_precision = 0.0;  // percentage points
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
};

// b - a, in percentage points.
struct DeltaTable {
  double entity_precision = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  std::vector<PairDelta> per_pair;
};

inline DeltaTable CompareReports(const ScoreReport &a, const ScoreReport &b) {
  std::unordered_map<std::string, const PairScore *> b_rows;
  for (const auto &row : b.per_pair) b_rows.emplace(row.id, &row);
  if (a.per_pair.size() != b.per_pair.size() || b_rows.size() != b.per_pair.size()) {
    throw InvalidInput("reports cover different pair ids");
  }
  DeltaTable d;
  for (const auto &ra : a.per_pair) {
    auto it = b_rows.find(ra.id);
    if (it == b_rows.end()) throw InvalidInput("pair id \"" + ra.id + "\" missing from second report");
    const PairScore &rb = *it->second;
    d.per_pair.push_back({ra.id,
                          100.0 * (rb.entity_precision.value - ra.entity_precision.value),
                          100.0 * (rb.rouge1.f1 - ra.rouge1.f1),
                          100.0 * (rb.rouge2.f1 - ra.rouge2.f1),
                          100.0 * (rb.rougeL.f1 - ra.rougeL.f1)});
  }
  d.entity_precision = b.aggregates.entity_precision - a.aggregates.entity_precision;
  d.rouge1 = b.aggregates.rouge1 - a.aggregates.rouge1;
  d.rouge2 = b.aggregates.rouge2 - a.aggregates.rouge2;
  d.rougeL = b.aggregates.rougeL - a.aggregates.rougeL;
  return d;
}

// JSON -----------------------------------------------------------------------

namespace internal {

inline nlohmann::ordered_json ToJson(const RougeScore &s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

inline RougeScore RougeFromJson(const nlohmann::json &j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f1").get<double>()};
}

}  // namespace internal

inline nlohmann::ordered_json ToJson(const Histogram &h) {
  nlohmann::ordered_json j;
  j["total"] = h.total;
  j["counts"] = nlohmann::ordered_json::object();
  for (const auto &[count, freq] : h.counts) j["counts"][std::to_string(count)] = freq;
  j["mean"] = h.mean ? nlohmann::ordered_json(RoundTo(*h.mean, 4)) : nullptr;
  return j;
}

inline nlohmann::ordered_json ToJson(const ScoreReport &report,
                                     const Histogram *histogram = nullptr) {
  const Aggregates &a = report.aggregates;
  nlohmann::ordered_json j;
  j["aggregates"] = {{"pair_count", a.pair_count},
                     {"vacuous_count", a.vacuous_count},
                     {"entity_precision", RoundTo(a.entity_precision, 2)},
                     {"rouge1", RoundTo(a.rouge1, 2)},
                     {"rouge2", RoundTo(a.rouge2, 2)},
                     {"rougeL", RoundTo(a.rougeL, 2)}};
  if (histogram) j["entity_count_histogram"] = ToJson(*histogram);
  j["per_pair"] = nlohmann::ordered_json::array();
  for (const PairScore &r : report.per_pair) {
    nlohmann::ordered_json row;
    row["id"] = r.id;
    row["entity_precision"] = {{"value", r.entity_precision.value},
                               {"hypothesis_entity_count",
                                r.entity_precision.hypothesis_entity_count},
                               {"covered_count", r.entity_precision.covered_count},
                               {"vacuous", r.entity_precision.vacuous}};
    row["rouge1"] = internal::ToJson(r.rouge1);
    row["rouge2"] = internal::ToJson(r.rouge2);
    row["rougeL"] = internal::ToJson(r.rougeL);
    row["entity_count"] = r.entity_count;
    j["per_pair"].push_back(std::move(row));
  }
  return j;
}

// Rebuilds a report from its JSON form. Aggregates are recomputed from the
// rows, which carry full precision.
inline ScoreReport ScoreReportFromJson(const nlohmann::json &j) {
  ScoreReport report;
  try {
    for (const auto &row : j.at("per_pair")) {
      PairScore r;
      r.id = row.at("id").get<std::string>();
      const auto &ep = row.at("entity_precision");
      r.entity_precision.value = ep.at("value").get<double>();
      r.entity_precision.hypothesis_entity_count =
          ep.at("hypothesis_entity_count").get<std::size_t>();
      r.entity_precision.covered_count = ep.at("covered_count").get<std::size_t>();
      r.entity_precision.vacuous = ep.at("vacuous").get<bool>();
      r.rouge1 = internal::RougeFromJson(row.at("rouge1"));
      r.rouge2 = internal::RougeFromJson(row.at("rouge2"));
      r.rougeL = internal::RougeFromJson(row.at("rougeL"));
      r.entity_count = row.at("entity_count").get<std::size_t>();
      report.per_pair.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception &e) {
    throw InvalidInput(std::string("malformed score report: ") + e.what());
  }
  report.aggregates = Aggregate(report.per_pair);
  return report;
}

inline nlohmann::ordered_json ToJson(const DeltaTable &d) {
  nlohmann::ordered_json j;
  j["aggregates"] = {{"entity_precision", RoundTo(d.entity_precision, 2)},
                     {"rouge1", RoundTo(d.rouge1, 2)},
                     {"rouge2", RoundTo(d.rouge2, 2)},
                     {"rougeL", RoundTo(d.rougeL, 2)}};
  j["per_pair"] = nlohmann::ordered_json::array();
  for (const auto &p : d.per_pair) {
    j["per_pair"].push_back({{"id", p.id},
                             {"entity_precision", RoundTo(p.entity_precision, 2)},
                             {"rouge1", RoundTo(p.rouge1, 2)},
                             {"rouge2", RoundTo(p.rouge2, 2)},
                             {"rougeL", RoundTo(p.rougeL, 2)}});
  }
  return j;
}

// Plain-text tables -------------------------------------------------------------

inline std::string RenderTable(const ScoreReport &report, const Histogram *histogram = nullptr) {
  const Aggregates &a = report.aggregates;
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%8s %8s %17s %8s %8s %8s\n", "pairs", "vacuous",
                "Entity Precision", "R-1", "R-2", "R-L");
  out << line;
  std::snprintf(line, sizeof line, "%8zu %8zu %17.2f %8.2f %8.2f %8.2f\n", a.pair_count,
                a.vacuous_count, a.entity_precision, a.rouge1, a.rouge2, a.rougeL);
  out << line;
  if (histogram) {
    out << '\n';
    std::snprintf(line, sizeof line, "%8s %10s\n", "entities", "frequency");
    out << line;
    for (const auto &[count, freq] : histogram->counts) {
      std::snprintf(line, sizeof line, "%8zu %10zu\n", count, freq);
      out << line;
    }
    if (histogram->mean) {
      std::snprintf(line, sizeof line, "%8s %10.4f\n", "mean", *histogram->mean);
    } else {
      std::snprintf(line, sizeof line, "%8s %10s\n", "mean", "n/a");
    }
    out << line;
  }
  return out.str();
}

inline std::string RenderTable(const DeltaTable &d) {
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%-24s %17s %8s %8s %8s\n", "", "Entity Precision", "R-1",
                "R-2", "R-L");
  out << line;
  std::snprintf(line, sizeof line, "%-24s %+17.2f %+8.2f %+8.2f %+8.2f\n", "delta (b - a)",
                d.entity_precision, d.rouge1, d.rouge2, d.rougeL);
  out << line;
  return out.str();
}

}  // namespace ecc
