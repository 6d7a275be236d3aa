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

#include "ecc/wikigen.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "oracles.hpp"
#include "test_util.hpp"
#include "wiki_validator.hpp"

namespace ecc {
namespace {

using ecc_test::Fixture;
using ecc_test::TempDir;

std::string Record(const std::string &title, const std::string &text) {
  return nlohmann::json({{"title", title}, {"text", text}}).dump() + "\n";
}

std::string Numbered(int count, int first = 0) {
  std::string s;
  for (int i = first; i < first + count; ++i) {
    if (!s.empty()) s += ' ';
    s += "Sentence number" + std::to_string(i) + " here.";
  }
  return s;
}

TargetProfile Profile(const std::string &name, std::size_t n, std::size_t m, double a,
                      double tol = 0.05) {
  TargetProfile p;
  p.name = name;
  p.summary_sents = n;
  p.doc_sents = m;
  p.abstractiveness = a;
  p.tolerance = tol;
  return p;
}

TEST(ScrubMarkupTest, Examples) {
  EXPECT_EQ(ScrubMarkup("Intro. == History == More."), "Intro. More.");
  EXPECT_EQ(ScrubMarkup("{{Infobox | a = {{b}} }}Text [[Paris|the city]] and [[Rome]]."),
            "Text the city and Rome.");
  EXPECT_EQ(ScrubMarkup("Line one.\n== Heading ==\n\nLine two."), "Line one.\nLine two.");
  EXPECT_EQ(ScrubMarkup("Kept. {{unclosed template"), "Kept.");
  EXPECT_EQ(ScrubMarkup("Plain   text."), "Plain text.");
}

TEST(ArticleReaderTest, ReadsAndCountsMalformed) {
  TempDir dir;
  const auto path = dir.Write("dump.jsonl", Record("A", "One.") + "not json\n" +
                                                Record("B", "Two [[x|y]].") + "{\"title\":1}\n" +
                                                Record("C", "Three."));
  std::size_t malformed = 0;
  const auto articles = ReadArticles(path, &malformed);
  ASSERT_EQ(articles.size(), 3u);
  EXPECT_EQ(malformed, 2u);
  EXPECT_EQ(articles[1].title, "B");
  EXPECT_EQ(articles[1].text, "Two y.");
  EXPECT_EQ(articles[2].index, 2u);
  EXPECT_THROW(ReadArticles(dir.File("missing.jsonl")), Error);
}

TEST(MakePseudoPairTest, SlicesExactSentences) {
  const auto profile = Profile("p", 2, 5, 0.5);
  const auto c = MakePseudoPair(Numbered(10), profile);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->pseudo_summary, Numbered(2));
  EXPECT_EQ(c->pseudo_document, Numbered(5, 2));
  EXPECT_EQ(c->document_sentences.size(), 5u);
  EXPECT_EQ(c->summary_tokens.size(), 6u);
  EXPECT_FALSE(MakePseudoPair(Numbered(6), profile).has_value());
  const auto exact = MakePseudoPair(Numbered(7), profile);
  ASSERT_TRUE(exact.has_value());
  EXPECT_EQ(exact->pseudo_document, Numbered(5, 2));
}

TEST(OracleTest, Example) {
  const auto r = ExtractiveOracleRouge1(
      std::vector<std::vector<std::string>>{{"the", "cat", "sat"}, {"dogs", "run", "fast"}},
      {"the", "cat", "runs"});
  EXPECT_NEAR(r.score, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(r.selected, std::vector<std::size_t>{0});
}

TEST(OracleTest, TiesPreferLowestIndex) {
  const auto r = ExtractiveOracleRouge1(
      std::vector<std::vector<std::string>>{{"x"}, {"a"}, {"a"}}, {"a"});
  EXPECT_EQ(r.selected, std::vector<std::size_t>{1});
  EXPECT_DOUBLE_EQ(r.score, 1.0);
}

TEST(OracleTest, BoundedByExhaustiveAndSingles) {
  std::mt19937 rng(37);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (int round = 0; round < 200; ++round) {
    std::vector<std::vector<std::string>> sents(1 + rng() % 8);
    for (auto &s : sents) {
      for (unsigned i = 1 + rng() % 5; i > 0; --i) s.push_back(vocab[rng() % vocab.size()]);
    }
    std::vector<std::string> summary;
    for (unsigned i = 1 + rng() % 6; i > 0; --i) summary.push_back(vocab[rng() % vocab.size()]);
    const double greedy = ExtractiveOracleRouge1(sents, summary).score;
    double best_single = 0.0;
    for (const auto &s : sents) best_single = std::max(best_single, RougeN(s, summary, 1).f1);
    EXPECT_GE(greedy, best_single);
    EXPECT_LE(greedy, ecc_test::ExhaustiveOracle(sents, summary) + 1e-12);
    EXPECT_DOUBLE_EQ(greedy, ecc_test::GreedyOracle(sents, summary));
  }
}

TEST(TargetProfileTest, Validation) {
  EXPECT_NO_THROW(Profile("ok", 1, 1, 1.0, 0.0).Validate());
  EXPECT_THROW(Profile("", 1, 1, 0.5).Validate(), Error);
  EXPECT_THROW(Profile("bad name", 1, 1, 0.5).Validate(), Error);
  EXPECT_THROW(Profile("p", 0, 1, 0.5).Validate(), Error);
  EXPECT_THROW(Profile("p", 1, 1, 0.0).Validate(), Error);
  EXPECT_THROW(Profile("p", 1, 1, 1.2).Validate(), Error);
  EXPECT_THROW(Profile("p", 1, 1, 0.5, -0.1).Validate(), Error);
}

// Five articles whose summary sentences reappear verbatim in the document
// (oracle 1.0) and one whose document shares nothing.
std::string ExtractiveDump() {
  std::string dump;
  for (int i = 0; i < 5; ++i) {
    const std::string s = "Alpha beta gamma" + std::to_string(i) + ".";
    dump += Record("T" + std::to_string(i), s + " Filler words here. " + s + " More filler text.");
  }
  dump += Record("X", "Alpha beta. Nothing shared here. Totally different words. Yet more.");
  return dump;
}

TEST(BuildIntermediateCorpusTest, ExactBandAndCap) {
  TempDir dir;
  const auto dump = dir.Write("dump.jsonl", ExtractiveDump());
  auto profile = Profile("ext", 1, 3, 1.0, 0.0);
  auto corpus = BuildIntermediateCorpus(dump, {profile});
  EXPECT_EQ(corpus.dataset.pairs.size(), 5u);
  EXPECT_EQ(corpus.report.profiles[0].out_of_band, 1u);
  EXPECT_EQ(corpus.dataset.pairs[0].id, "ext-0");
  EXPECT_EQ(corpus.dataset.pairs[0].codes, std::vector<std::string>{"<T-ext>"});
  EXPECT_EQ(corpus.dataset.pairs[0].document, "<T-ext> Filler words here. Alpha beta gamma0. More filler text.");
  EXPECT_EQ(*corpus.dataset.pairs[0].reference_summary, "Alpha beta gamma0.");

  profile.max_pairs = 2;
  corpus = BuildIntermediateCorpus(dump, {profile});
  EXPECT_EQ(corpus.dataset.pairs.size(), 2u);
  EXPECT_EQ(corpus.dataset.pairs[1].id, "ext-1");
  EXPECT_EQ(corpus.report.articles_read, 2u);
}

TEST(BuildIntermediateCorpusTest, ZeroMatchProfileWarns) {
  TempDir dir;
  const auto dump = dir.Write("dump.jsonl", ExtractiveDump());
  const auto corpus = BuildIntermediateCorpus(dump, {Profile("never", 1, 3, 0.2, 0.01)});
  EXPECT_TRUE(corpus.dataset.pairs.empty());
  ASSERT_EQ(corpus.report.warnings.size(), 1u);
  EXPECT_NE(corpus.report.warnings[0].find("never"), std::string::npos);
}

TEST(BuildIntermediateCorpusTest, RejectsBadProfiles) {
  TempDir dir;
  const auto dump = dir.Write("dump.jsonl", ExtractiveDump());
  EXPECT_THROW(BuildIntermediateCorpus(dump, {}), Error);
  EXPECT_THROW(BuildIntermediateCorpus(dump, {Profile("a", 1, 1, 0.5), Profile("a", 1, 2, 0.5)}),
               Error);
}

TEST(BuildIntermediateCorpusTest, FixtureMatchesAuditAndValidator) {
  std::ifstream in(Fixture("wiki_expected.json"));
  const auto expected = nlohmann::json::parse(in);
  const auto profile = Profile("wiki", 2, 5, 0.6, 0.05);
  const auto corpus = BuildIntermediateCorpus(Fixture("wiki_dump.jsonl"), {profile});
  EXPECT_EQ(corpus.report.articles_read, 50u);
  EXPECT_EQ(corpus.report.profiles[0].too_short, expected["too_short"].get<std::size_t>());
  ASSERT_EQ(corpus.dataset.pairs.size(), expected["kept"].get<std::size_t>());
  std::vector<std::size_t> indices;
  for (const auto &p : corpus.pairs) indices.push_back(p.article_index);
  EXPECT_EQ(indices, expected["kept_indices"].get<std::vector<std::size_t>>());

  const auto check = ecc_test::ValidateIntermediate(
      corpus.dataset, ReadArticles(Fixture("wiki_dump.jsonl")), {profile});
  EXPECT_EQ(check.checked, corpus.dataset.pairs.size());
  EXPECT_TRUE(check.failures.empty()) << check.failures.front();
}

TEST(BuildIntermediateCorpusTest, JobCountDoesNotChangeOutput) {
  const auto profiles = std::vector<TargetProfile>{Profile("wiki", 2, 5, 0.6),
                                                   Profile("wide", 1, 3, 0.5, 0.3)};
  GenerationOptions one;
  one.batch_size = 7;
  GenerationOptions eight = one;
  eight.jobs = 8;
  const auto a = BuildIntermediateCorpus(Fixture("wiki_dump.jsonl"), profiles, one);
  const auto b = BuildIntermediateCorpus(Fixture("wiki_dump.jsonl"), profiles, eight);
  std::ostringstream sa, sb;
  WriteDataset(a.dataset, sa);
  WriteDataset(b.dataset, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(ToJson(a.report).dump(), ToJson(b.report).dump());
}

}  // namespace
}  // namespace ecc
