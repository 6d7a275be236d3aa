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

#include "ecc/eval.hpp"

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"

namespace ecc {
namespace {

using ecc_test::Fixture;

Dataset Score3() { return LoadDataset(Fixture("score3.jsonl")); }

ScoreReport Score(const Dataset &d, MatchMode mode = MatchMode::kSourceText) {
  ScoreOptions opts;
  opts.mode = mode;
  return ScoreOutputs(d, EntitySource(), MakeCodeVocab(3), opts);
}

TEST(ScoreOutputsTest, HandComputedFixture) {
  const Dataset d = Score3();
  const ScoreReport r = Score(d);
  ASSERT_EQ(r.per_pair.size(), 3u);

  // Per-pair ROUGE against the brute-force scorer.
  for (std::size_t i = 0; i < 3; ++i) {
    const auto hyp = NormalizedTokens(*d.pairs[i].hypothesis);
    const auto ref = NormalizedTokens(*d.pairs[i].reference_summary);
    EXPECT_DOUBLE_EQ(r.per_pair[i].rouge1.f1, ecc_test::BruteRougeN(hyp, ref, 1).f);
    EXPECT_DOUBLE_EQ(r.per_pair[i].rouge2.f1, ecc_test::BruteRougeN(hyp, ref, 2).f);
    EXPECT_DOUBLE_EQ(r.per_pair[i].rougeL.f1, ecc_test::BruteRougeL(hyp, ref).f);
  }
  // s2: hypothesis names Lisbon, absent from its document. s3: no entities.
  EXPECT_DOUBLE_EQ(r.per_pair[0].entity_precision.value, 1.0);
  EXPECT_DOUBLE_EQ(r.per_pair[1].entity_precision.value, 0.0);
  EXPECT_TRUE(r.per_pair[2].entity_precision.vacuous);
  EXPECT_EQ(r.per_pair[2].entity_count, 0u);
  EXPECT_NEAR(r.per_pair[1].rouge2.f1, 6.0 / 13.0, 1e-12);
  EXPECT_NEAR(r.per_pair[2].rougeL.f1, 4.0 / 9.0, 1e-12);

  EXPECT_EQ(r.aggregates.pair_count, 3u);
  EXPECT_EQ(r.aggregates.vacuous_count, 1u);
  EXPECT_DOUBLE_EQ(RoundTo(r.aggregates.entity_precision, 2), 66.67);
  EXPECT_DOUBLE_EQ(RoundTo(r.aggregates.rouge1, 2), 77.78);
  EXPECT_DOUBLE_EQ(RoundTo(r.aggregates.rouge2, 2), 58.24);
  EXPECT_DOUBLE_EQ(RoundTo(r.aggregates.rougeL, 2), 70.37);
}

TEST(ScoreOutputsTest, ReferencesAsHypothesesScoreOneHundred) {
  Dataset d = Score3();
  for (Pair &p : d.pairs) p.hypothesis = p.reference_summary;
  const ScoreReport r = Score(d);
  EXPECT_DOUBLE_EQ(r.aggregates.rouge1, 100.0);
  EXPECT_DOUBLE_EQ(r.aggregates.rouge2, 100.0);
  EXPECT_DOUBLE_EQ(r.aggregates.rougeL, 100.0);
  // Reference faithfulness: Paris covered, Madrid of Madrid/Lisbon, Oslo not.
  EXPECT_NEAR(r.aggregates.entity_precision, 100.0 * (1.0 + 0.5 + 0.0) / 3.0, 1e-9);
}

TEST(ScoreOutputsTest, CodesOnDocumentsAreIgnored) {
  Dataset d = Score3();
  const ScoreReport plain = Score(d);
  for (Pair &p : d.pairs) {
    p.document = "<FF-high> " + p.document;
    p.codes = {"<FF-high>"};
  }
  const ScoreReport coded = Score(d);
  EXPECT_EQ(ToJson(plain).dump(), ToJson(coded).dump());
}

TEST(ScoreOutputsTest, StrictNeverAboveSourceText) {
  const ScoreReport strict = Score(Score3(), MatchMode::kStrictSet);
  const ScoreReport text = Score(Score3(), MatchMode::kSourceText);
  EXPECT_LE(strict.aggregates.entity_precision, text.aggregates.entity_precision);
}

TEST(ScoreOutputsTest, MissingHypothesisNamesIds) {
  Dataset d = Score3();
  d.pairs[1].hypothesis.reset();
  try {
    Score(d);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("s2"), std::string::npos);
  }
}

TEST(AggregateTest, MeanOfRowsAndOrderInvariant) {
  std::mt19937 rng(41);
  std::vector<PairScore> rows(25);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].id = std::to_string(i);
    rows[i].entity_precision.value = (rng() % 101) / 100.0;
    rows[i].entity_precision.vacuous = rng() % 5 == 0;
    rows[i].rouge1.f1 = (rng() % 101) / 100.0;
    rows[i].rouge2.f1 = (rng() % 101) / 100.0;
    rows[i].rougeL.f1 = (rng() % 101) / 100.0;
  }
  const Aggregates a = Aggregate(rows);
  double sum = 0;
  std::size_t vacuous = 0;
  for (const auto &r : rows) {
    sum += r.rouge1.f1;
    vacuous += r.entity_precision.vacuous;
  }
  EXPECT_NEAR(a.rouge1, 100.0 * sum / 25.0, 1e-9);
  EXPECT_EQ(a.vacuous_count, vacuous);
  auto shuffled = rows;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const Aggregates b = Aggregate(shuffled);
  EXPECT_NEAR(a.entity_precision, b.entity_precision, 1e-9);
  EXPECT_NEAR(a.rougeL, b.rougeL, 1e-9);
}

TEST(ScoreReportJsonTest, RoundTripRecomputesAggregates) {
  const ScoreReport r = Score(Score3());
  const ScoreReport back = ScoreReportFromJson(nlohmann::json::parse(ToJson(r).dump()));
  EXPECT_EQ(ToJson(back).dump(), ToJson(r).dump());
  const auto j = ToJson(r);
  EXPECT_EQ(j["aggregates"]["rouge2"].get<double>(), 58.24);
  EXPECT_THROW(ScoreReportFromJson(nlohmann::json::parse(R"({"per_pair":[{"id":"x"}]})")), Error);
}

TEST(HistogramTest, Counts) {
  const Histogram h = HistogramFromCounts({2, 2, 3});
  EXPECT_EQ(h.counts, (std::map<std::size_t, std::size_t>{{2, 2}, {3, 1}}));
  EXPECT_EQ(h.total, 3u);
  EXPECT_NEAR(*h.mean, 2.3333, 1e-4);
  EXPECT_EQ(ToJson(h)["mean"].get<double>(), 2.3333);

  const Histogram empty = HistogramFromCounts({});
  EXPECT_EQ(empty.total, 0u);
  EXPECT_FALSE(empty.mean.has_value());

  const Histogram none = EntityCountHistogram({"no entities here", "still none"});
  EXPECT_EQ(none.counts, (std::map<std::size_t, std::size_t>{{0, 2}}));
  EXPECT_DOUBLE_EQ(*none.mean, 0.0);
}

TEST(HistogramTest, TotalsMatchInputSize) {
  const std::vector<std::string> texts = {"Stephen Hawking joined YouTube", "", "We met Ann.",
                                          "I watched YouTube and then more YouTube."};
  const Histogram h = EntityCountHistogram(texts);
  std::size_t sum = 0;
  for (const auto &[count, freq] : h.counts) sum += freq;
  EXPECT_EQ(sum, texts.size());
  EXPECT_EQ(h.counts.at(2), 2u);
}

TEST(CompareReportsTest, Deltas) {
  const ScoreReport a = Score(Score3());
  const DeltaTable same = CompareReports(a, a);
  EXPECT_DOUBLE_EQ(same.entity_precision, 0.0);
  EXPECT_DOUBLE_EQ(same.rouge1, 0.0);
  for (const auto &p : same.per_pair) EXPECT_DOUBLE_EQ(p.rougeL, 0.0);

  ScoreReport b = a;
  for (auto &row : b.per_pair) row.entity_precision.value = std::min(1.0, row.entity_precision.value + 0.02);
  b.per_pair[1].entity_precision.value = 0.02;
  b.aggregates = Aggregate(b.per_pair);
  const DeltaTable d = CompareReports(a, b);
  EXPECT_NEAR(d.per_pair[1].entity_precision, 2.0, 1e-9);
  EXPECT_EQ(ToJson(d)["per_pair"][1]["entity_precision"].get<double>(), 2.0);

  ScoreReport other = a;
  other.per_pair[0].id = "zz";
  EXPECT_THROW(CompareReports(a, other), Error);
  other.per_pair.pop_back();
  EXPECT_THROW(CompareReports(a, other), Error);
}

TEST(RenderTableTest, Layout) {
  const ScoreReport r = Score(Score3());
  const Histogram h = HistogramFromCounts({2, 2, 3});
  const std::string table = RenderTable(r, &h);
  EXPECT_NE(table.find("Entity Precision"), std::string::npos);
  EXPECT_NE(table.find("66.67"), std::string::npos);
  EXPECT_NE(table.find("77.78"), std::string::npos);
  EXPECT_NE(table.find("2.3333"), std::string::npos);
  EXPECT_NE(RenderTable(CompareReports(r, r)).find("+0.00"), std::string::npos);
}

}  // namespace
}  // namespace ecc
