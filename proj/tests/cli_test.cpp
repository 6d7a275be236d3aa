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

#include "ecc/cli.hpp"

#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace ecc {
namespace {

using ecc_test::Fixture;
using ecc_test::ReadFile;
using ecc_test::RunCli;
using ecc_test::TempDir;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { ::unsetenv("ECC_CONFIG"); }
  TempDir dir_;
};

TEST_F(CliTest, PrepareTrainBalancesFixture) {
  const auto out = dir_.File("train.jsonl");
  const auto report = dir_.File("report.json");
  const auto r = RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--out", out,
                         "--k", "3", "--report", report});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(ReadFile(report));
  EXPECT_EQ(j["bin_counts"], nlohmann::json({3, 3, 3}));
  EXPECT_EQ(j["code_tokens"], nlohmann::json({"<FF-low>", "<FF-mid>", "<FF-high>"}));
  const Dataset d = LoadDataset(out);
  ASSERT_EQ(d.pairs.size(), 9u);
  EXPECT_EQ(d.pairs[2].codes, std::vector<std::string>{"<FF-high>"});
}

TEST_F(CliTest, PrepareTrainFixedCuts) {
  const auto r = RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--cuts", "0.36,0.5",
                         "--report", dir_.File("report.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(ReadFile(dir_.File("report.json")));
  EXPECT_EQ(j["cuts"], nlohmann::json({0.36, 0.5}));
  EXPECT_EQ(j["bin_counts"], nlohmann::json({4, 1, 4}));
  // t1 has precision exactly 0.5: lower-inclusive, so the top bin.
  EXPECT_EQ(r.out.rfind(R"({"id":"t1","codes":["<FF-high>"])", 0), 0u);
}

TEST_F(CliTest, PrepareTrainErrors) {
  const auto missing = dir_.Write("m.jsonl", R"({"id":"a","document":"Doc."})" "\n");
  auto r = RunCli({"prepare-train", "--in", missing});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("missing reference_summary for ids: a"), std::string::npos);

  std::string same;
  for (int i = 0; i < 5; ++i) {
    same += R"({"id":"p)" + std::to_string(i) +
            R"(","document":"We met Ann in Rome.","reference_summary":"We met Ann."})" "\n";
  }
  r = RunCli({"prepare-train", "--in", dir_.Write("same.jsonl", same)});
  EXPECT_EQ(r.code, cli::kExitDegenerate);
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);

  EXPECT_EQ(RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--k", "4", "--cuts",
                    "0.3,0.6"}).code,
            cli::kExitInvalid);
  EXPECT_EQ(RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--cuts", "0.6,0.3"}).code,
            cli::kExitInvalid);
  EXPECT_EQ(RunCli({"prepare-train"}).code, cli::kExitInvalid);
  EXPECT_EQ(RunCli({"no-such-command"}).code, cli::kExitInvalid);
  EXPECT_EQ(RunCli({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, PrepareTrainWithAnnotations) {
  // Annotations say every reference names only "report", which no document
  // contains, so all precisions are 0 and binning is degenerate.
  std::string ann;
  const Dataset d = LoadDataset(Fixture("train9.jsonl"));
  for (const Pair &p : d.pairs) {
    ann += R"({"id":")" + p.id + R"(","field":"document","spans":[{"start":15,"end":20,"text":"Paris","label":"LOC"}]})" "\n";
    ann += R"({"id":")" + p.id + R"(","field":"reference_summary","spans":[{"start":4,"end":10,"text":"report","label":"MISC"}]})" "\n";
  }
  const auto path = dir_.Write("ann.jsonl", ann);
  auto r = RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--annotations", path});
  EXPECT_EQ(r.code, cli::kExitDegenerate) << r.err;

  const auto bad = dir_.Write("bad.jsonl", R"({"id":"t1","field":"document","spans":[{"start":0,"end":5,"text":"Paris","label":"LOC"}]})" "\n");
  r = RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--annotations", bad});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("span text mismatch"), std::string::npos);
}

TEST_F(CliTest, PrepareInfer) {
  auto r = RunCli({"prepare-infer", "--in", Fixture("score3.jsonl"), "--code", "FF-high"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find(R"("document":"<FF-high> Officials from Paris)"), std::string::npos);

  r = RunCli({"prepare-infer", "--in", Fixture("score3.jsonl"), "--code", "<FF-low>", "--target",
              "T-xsum"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find(R"("codes":["<FF-low>","<T-xsum>"])"), std::string::npos);

  r = RunCli({"prepare-infer", "--in", Fixture("score3.jsonl"), "--code", "FF-top"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  r = RunCli({"prepare-infer", "--in", Fixture("score3.jsonl"), "--code", "FF-high", "--target",
              "FF-low"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
}

TEST_F(CliTest, StripRoundTrip) {
  const auto coded = dir_.File("coded.jsonl");
  ASSERT_EQ(RunCli({"prepare-train", "--in", Fixture("train9.jsonl"), "--out", coded, "--report",
                    dir_.File("r.json")}).code,
            cli::kExitOk);
  const auto r = RunCli({"strip", "--in", coded});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Dataset orig = LoadDataset(Fixture("train9.jsonl"));
  const Dataset stripped = LoadDataset(dir_.Write("s.jsonl", r.out));
  ASSERT_EQ(stripped.pairs.size(), orig.pairs.size());
  for (std::size_t i = 0; i < orig.pairs.size(); ++i) {
    EXPECT_EQ(stripped.pairs[i].document, orig.pairs[i].document);
    EXPECT_EQ(stripped.pairs[i].codes.size(), 1u);
  }
}

TEST_F(CliTest, ScoreFormats) {
  auto r = RunCli({"score", "--in", Fixture("score3.jsonl"), "--histogram"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["aggregates"]["entity_precision"].get<double>(), 66.67);
  EXPECT_EQ(j["aggregates"]["rouge1"].get<double>(), 77.78);
  EXPECT_EQ(j["entity_count_histogram"]["total"], 3);

  r = RunCli({"score", "--in", Fixture("score3.jsonl"), "--format", "table"});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("70.37"), std::string::npos);

  r = RunCli({"score", "--in", Fixture("score3.jsonl"), "--mode", "strict-set"});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_LE(nlohmann::json::parse(r.out)["aggregates"]["entity_precision"].get<double>(), 66.67);

  EXPECT_EQ(RunCli({"score", "--in", Fixture("score3.jsonl"), "--format", "xml"}).code,
            cli::kExitInvalid);
  EXPECT_EQ(RunCli({"score", "--in", Fixture("train9.jsonl")}).code, cli::kExitInvalid);
}

TEST_F(CliTest, CompareReports) {
  const auto a = dir_.File("a.json");
  ASSERT_EQ(RunCli({"score", "--in", Fixture("score3.jsonl"), "--out", a}).code, cli::kExitOk);
  auto r = RunCli({"compare", "--a", a, "--b", a});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["aggregates"]["rouge1"].get<double>(), 0.0);
  r = RunCli({"compare", "--a", a, "--b", dir_.Write("junk.json", "{")});
  EXPECT_EQ(r.code, cli::kExitInvalid);
}

TEST_F(CliTest, WikigenReportAndWarning) {
  const auto out = dir_.File("wiki.jsonl");
  const auto report = dir_.File("wiki_report.json");
  const auto r = RunCli({"wikigen", "--dump", Fixture("wiki_dump.jsonl"), "--profiles",
                         Fixture("profiles.toml"), "--out", out, "--report", report});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning: profile nomatch kept no pairs"), std::string::npos);
  const auto j = nlohmann::json::parse(ReadFile(report));
  const auto expected = nlohmann::json::parse(ReadFile(Fixture("wiki_expected.json")));
  EXPECT_EQ(j["generation"]["articles_read"], 50);
  EXPECT_EQ(j["generation"]["profiles"][0]["kept"], expected["kept"]);
  EXPECT_EQ(j["generation"]["profiles"][1]["kept"], 0);
  EXPECT_EQ(LoadDataset(out).pairs.size(), expected["kept"].get<std::size_t>());
}

TEST_F(CliTest, WikigenWithFaithfulnessCodes) {
  const auto r = RunCli({"wikigen", "--dump", Fixture("wiki_dump.jsonl"), "--profiles",
                         Fixture("profiles.toml"), "--with-ff", "--report",
                         dir_.File("rep.json")});
  // Synthetic summaries carry no entities, so every pseudo pair is vacuous
  // and binning is degenerate.
  EXPECT_EQ(r.code, cli::kExitDegenerate);

  const auto dump = dir_.Write(
      "dump.jsonl",
      R"({"title":"A","text":"We met Ann in Rome. Filler text one. We met Ann in Rome. Filler two."})" "\n"
      R"({"title":"B","text":"We met Bob in Oslo. Filler text one. We met Bob there. Filler two."})" "\n"
      R"({"title":"C","text":"We met Cid in Kyiv. Filler text one. We met Zed in Lima. Filler two."})" "\n");
  const auto prof = dir_.Write("p.toml", "[ext]\nsummary_sents = 1\ndoc_sents = 3\n"
                                         "abstractiveness = 0.7\ntolerance = 0.3\n");
  const auto ok = RunCli({"wikigen", "--dump", dump, "--profiles", prof, "--with-ff",
                          "--report", dir_.File("rep2.json")});
  ASSERT_EQ(ok.code, cli::kExitOk) << ok.err;
  const Dataset d = LoadDataset(dir_.Write("ff.jsonl", ok.out));
  ASSERT_EQ(d.pairs.size(), 3u);
  EXPECT_EQ(d.pairs[0].codes, (std::vector<std::string>{"<FF-high>", "<T-ext>"}));
  for (const Pair &p : d.pairs) EXPECT_EQ(p.codes.size(), 2u);
  const auto rep = nlohmann::json::parse(ReadFile(dir_.File("rep2.json")));
  EXPECT_EQ(rep["boundaries"]["bin_counts"], nlohmann::json({1, 1, 1}));
}

TEST_F(CliTest, ConfigFromFlagAndEnvironment) {
  const auto flag = RunCli({"--config", Fixture("config.toml"), "wikigen", "--dump",
                            Fixture("wiki_dump.jsonl"), "--report", dir_.File("r1.json")});
  ASSERT_EQ(flag.code, cli::kExitOk) << flag.err;
  ::setenv("ECC_CONFIG", Fixture("config.toml").c_str(), 1);
  const auto env = RunCli({"wikigen", "--dump", Fixture("wiki_dump.jsonl"), "--report",
                           dir_.File("r2.json")});
  ::unsetenv("ECC_CONFIG");
  ASSERT_EQ(env.code, cli::kExitOk) << env.err;
  EXPECT_EQ(flag.out, env.out);
  EXPECT_EQ(ReadFile(dir_.File("r1.json")), ReadFile(dir_.File("r2.json")));
  EXPECT_FALSE(flag.out.empty());

  const auto bad = RunCli({"--config", dir_.File("missing.toml"), "strip", "--in",
                           Fixture("score3.jsonl")});
  EXPECT_EQ(bad.code, cli::kExitInvalid);
}

TEST_F(CliTest, UnwritableOutputFails) {
  const auto r = RunCli({"strip", "--in", Fixture("score3.jsonl"), "--out",
                         "/nonexistent/dir/out.jsonl"});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("cannot open for writing"), std::string::npos);
}

}  // namespace
}  // namespace ecc
