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

// The `ecc` command line. Exit codes: 0 success, 1 input or validation
// error, 2 degenerate score distribution. Diagnostics go to the error
// stream; data goes to --out or the output stream.

#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecc/config.hpp"
#include "ecc/control.hpp"
#include "ecc/corpus.hpp"
#include "ecc/error.hpp"
#include "ecc/eval.hpp"
#include "ecc/metrics.hpp"
#include "ecc/ner.hpp"
#include "ecc/parallel.hpp"
#include "ecc/wikigen.hpp"

namespace ecc::cli {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitDegenerate = 2;

namespace internal {

struct GlobalFlags {
  std::string config_path;
  std::optional<unsigned> jobs;
  std::optional<int> k;
  std::string cuts;
  std::optional<std::string> mode;
  std::string gazetteer;
  std::string abbreviations;
  std::string codes;    // faithfulness ladder override, comma separated
  std::string targets;  // extra target names, comma separated
};

// Resources shared by the subcommands once flags and config are merged.
class Session {
 public:
  Session(const GlobalFlags &flags) {
    std::string path = flags.config_path;
    if (path.empty()) {
      if (const char *env = std::getenv("ECC_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) config_ = LoadConfig(path);

    if (flags.k) config_.k = *flags.k;
    if (!flags.cuts.empty()) {
      std::vector<double> cuts;
      for (const auto &item : ecc::internal::SplitList(flags.cuts)) {
        cuts.push_back(ecc::internal::ParseDouble(item, "--cuts"));
      }
      config_.fixed_cuts = std::move(cuts);
    } else if (flags.k) {
      config_.fixed_cuts.reset();
    }
    if (flags.mode) config_.matching_mode = ParseMatchMode(*flags.mode);
    if (!flags.gazetteer.empty()) config_.gazetteer_path = flags.gazetteer;
    if (!flags.abbreviations.empty()) config_.abbreviations_path = flags.abbreviations;
    if (!flags.codes.empty()) config_.faithfulness_names = ecc::internal::SplitList(flags.codes);
    for (auto &t : ecc::internal::SplitList(flags.targets)) config_.targets.push_back(t);
    jobs_ = flags.jobs ? *flags.jobs : config_.jobs ? *config_.jobs : DefaultJobs();
    if (jobs_ == 0) jobs_ = 1;

    if (config_.fixed_cuts) {
      boundaries_ = BinBoundaries::FromCuts(*config_.fixed_cuts);
      if (flags.k && *flags.k != boundaries_->k()) {
        throw ParameterError("--k " + std::to_string(*flags.k) + " disagrees with " +
                             std::to_string(boundaries_->cuts().size()) + " cuts");
      }
      config_.k = boundaries_->k();
    }
    if (config_.abbreviations_path) {
      abbreviations_ =
          std::make_unique<AbbreviationList>(AbbreviationList::Load(*config_.abbreviations_path));
    }
    if (config_.gazetteer_path) {
      gazetteer_ = std::make_unique<Gazetteer>(Gazetteer::Load(*config_.gazetteer_path));
    }
  }

  const Config &config() const { return config_; }
  unsigned jobs() const { return jobs_; }
  const std::optional<BinBoundaries> &boundaries() const { return boundaries_; }

  const AbbreviationList &abbreviations() const {
    return abbreviations_ ? *abbreviations_ : AbbreviationList::Builtin();
  }

  NerOptions ner_options() const { return {gazetteer_.get(), &abbreviations()}; }

  // Ladder for the configured k plus every configured or profiled target.
  CodeVocabulary vocabulary(const std::vector<std::string> &more_targets = {}) const {
    std::vector<std::string> names;
    auto add = [&](const std::string &n) {
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    };
    for (const auto &t : config_.targets) add(t);
    for (const auto &p : config_.profiles) add(p.name);
    for (const auto &t : more_targets) add(t);
    return MakeCodeVocab(config_.k, names, config_.faithfulness_names);
  }

  EntitySource entity_source(const std::string &annotations_path, const Dataset &plain) const {
    if (annotations_path.empty()) return EntitySource(ner_options());
    return EntitySource(LoadExternalAnnotations(annotations_path, plain), ner_options());
  }

  TrainingOptions training_options() const {
    TrainingOptions o;
    o.k = config_.k;
    o.fixed_cuts = boundaries_;
    o.mode = config_.matching_mode;
    o.jobs = jobs_;
    return o;
  }

 private:
  Config config_;
  unsigned jobs_ = 1;
  std::optional<BinBoundaries> boundaries_;
  std::unique_ptr<AbbreviationList> abbreviations_;
  std::unique_ptr<Gazetteer> gazetteer_;
};

inline void WriteData(const Dataset &dataset, const std::string &out_path, std::ostream &out) {
  if (out_path.empty() || out_path == "-") {
    WriteDataset(dataset, out);
  } else {
    WriteDataset(dataset, out_path);
  }
}

inline void WriteText(const std::string &text, const std::string &path, std::ostream &fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << text;
  if (!f) throw IoError(path + ": write failed");
}

}  // namespace internal

// Parses argv and runs one subcommand.
inline int Run(int argc, const char *const *argv, std::ostream &out = std::cout,
               std::ostream &err = std::cerr) {
  CLI::App app{"Entity coverage control: data preparation and faithfulness scoring", "ecc"};
  app.require_subcommand(1);
  app.fallthrough();

  internal::GlobalFlags g;
  app.add_option("--config", g.config_path, "config file (default: $ECC_CONFIG)");
  app.add_option("--jobs", g.jobs, "worker threads for per-pair stages")
      ->check(CLI::PositiveNumber);
  app.add_option("--gazetteer", g.gazetteer, "gazetteer file (name<TAB>phrase)");
  app.add_option("--abbreviations", g.abbreviations, "sentence splitter abbreviation list");
  app.add_option("--codes", g.codes, "faithfulness code names, lowest bin first");
  app.add_option("--targets", g.targets, "additional target names for the code vocabulary");

  // prepare-train
  std::string pt_in, pt_out, pt_annotations, pt_report;
  auto *pt = app.add_subcommand("prepare-train", "bin reference faithfulness and prepend codes");
  pt->add_option("--in", pt_in, "training dataset (JSONL)")->required();
  pt->add_option("--out", pt_out, "coded dataset (default: stdout)");
  pt->add_option("--k", g.k, "number of bins (default 3)");
  pt->add_option("--cuts", g.cuts, "fixed ascending cuts, e.g. 0.33,0.66");
  pt->add_option("--annotations", pt_annotations, "external entity annotations (JSONL)");
  pt->add_option("--mode", g.mode, "strict-set or source-text");
  pt->add_option("--report", pt_report, "boundary report path (default: stderr)");

  // prepare-infer
  std::string pi_in, pi_out, pi_code, pi_target;
  auto *pi = app.add_subcommand("prepare-infer", "prepend a fixed code to every document");
  pi->add_option("--in", pi_in, "dataset (JSONL)")->required();
  pi->add_option("--out", pi_out, "coded dataset (default: stdout)");
  pi->add_option("--code", pi_code, "faithfulness code, e.g. FF-high")->required();
  pi->add_option("--target", pi_target, "target code to stack, e.g. T-xsum");
  pi->add_option("--k", g.k, "number of bins (default 3)");

  // wikigen
  std::string wg_dump, wg_profiles, wg_out, wg_report;
  bool wg_with_ff = false;
  std::optional<std::size_t> wg_max;
  auto *wg = app.add_subcommand("wikigen", "build target-profiled pseudo pairs from Wikipedia");
  wg->add_option("--dump", wg_dump, "article dump (JSONL of title/text)")->required();
  wg->add_option("--profiles", wg_profiles, "profile file");
  wg->add_option("--out", wg_out, "intermediate corpus (default: stdout)");
  wg->add_option("--report", wg_report, "generation report path (default: stderr)");
  wg->add_option("--max-per-profile", wg_max, "cap for profiles without max_pairs");
  wg->add_flag("--with-ff", wg_with_ff, "also stack faithfulness codes");
  wg->add_option("--k", g.k, "number of bins for --with-ff (default 3)");
  wg->add_option("--cuts", g.cuts, "fixed cuts for --with-ff");
  wg->add_option("--mode", g.mode, "strict-set or source-text");

  // score
  std::string sc_in, sc_annotations, sc_format = "json", sc_out;
  bool sc_histogram = false;
  auto *sc = app.add_subcommand("score", "entity precision and ROUGE of system outputs");
  sc->add_option("--in", sc_in, "pairs with document, reference_summary, hypothesis")
      ->required();
  sc->add_option("--annotations", sc_annotations, "external entity annotations (JSONL)");
  sc->add_option("--mode", g.mode, "strict-set or source-text");
  sc->add_option("--format", sc_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  sc->add_flag("--histogram", sc_histogram, "add the hypothesis entity-count distribution");
  sc->add_option("--out", sc_out, "report path (default: stdout)");

  // strip
  std::string st_in, st_out;
  auto *st = app.add_subcommand("strip", "move leading codes from documents into codes");
  st->add_option("--in", st_in, "coded dataset (JSONL)")->required();
  st->add_option("--out", st_out, "plain dataset (default: stdout)");
  st->add_option("--k", g.k, "number of bins (default 3)");

  // compare
  std::string cmp_a, cmp_b, cmp_format = "json", cmp_out;
  auto *cmp = app.add_subcommand("compare", "per-metric deltas between two score reports");
  cmp->add_option("--a", cmp_a, "baseline score report (JSON)")->required();
  cmp->add_option("--b", cmp_b, "compared score report (JSON)")->required();
  cmp->add_option("--format", cmp_format, "json or table")
      ->check(CLI::IsMember({"json", "table"}));
  cmp->add_option("--out", cmp_out, "delta report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    internal::Session session(g);

    if (pt->parsed()) {
      const Dataset input = LoadDataset(pt_in);
      const CodeVocabulary vocab = session.vocabulary();
      const Dataset plain = StripDataset(input, vocab);
      const EntitySource source = session.entity_source(pt_annotations, plain);
      const TrainingSet result =
          PrepareTrainingSet(input, source, vocab, session.training_options());
      internal::WriteData(result.dataset, pt_out, out);
      internal::WriteText(BoundaryReport(result).dump() + "\n", pt_report, err);
      return kExitOk;
    }

    if (pi->parsed()) {
      const Dataset input = LoadDataset(pi_in);
      std::vector<std::string> more;
      std::optional<ControlCode> target;
      if (!pi_target.empty()) {
        target = ControlCode::Parse(pi_target);
        if (target->kind() != CodeKind::kTarget) {
          throw ParameterError("--target expects a T- code, got " + target->token());
        }
        more.push_back(std::string(target->name().substr(2)));
      }
      const CodeVocabulary vocab = session.vocabulary(more);
      const ControlCode code = ControlCode::Parse(pi_code);
      internal::WriteData(PrepareInferenceSet(input, vocab, code, target), pi_out, out);
      return kExitOk;
    }

    if (wg->parsed()) {
      std::vector<TargetProfile> profiles = session.config().profiles;
      if (!wg_profiles.empty()) {
        for (auto &p : LoadProfiles(wg_profiles)) profiles.push_back(std::move(p));
      }
      GenerationOptions options;
      options.max_per_profile = wg_max ? *wg_max : session.config().max_per_profile;
      options.jobs = session.jobs();
      options.abbreviations = &session.abbreviations();
      IntermediateCorpus corpus = BuildIntermediateCorpus(wg_dump, profiles, options);
      for (const auto &w : corpus.report.warnings) err << "warning: " << w << '\n';

      nlohmann::ordered_json report;
      report["generation"] = ToJson(corpus.report);
      Dataset result = std::move(corpus.dataset);
      if (wg_with_ff) {
        std::vector<std::string> names;
        for (const auto &p : profiles) names.push_back(p.name);
        const CodeVocabulary vocab = session.vocabulary(names);
        const TrainingSet coded = PrepareTrainingSet(
            result, EntitySource(session.ner_options()), vocab, session.training_options());
        report["boundaries"] = BoundaryReport(coded);
        result = coded.dataset;
      }
      internal::WriteData(result, wg_out, out);
      internal::WriteText(report.dump() + "\n", wg_report, err);
      return kExitOk;
    }

    if (sc->parsed()) {
      const Dataset input = LoadDataset(sc_in);
      const CodeVocabulary vocab = session.vocabulary();
      const Dataset plain = StripDataset(input, vocab);
      const EntitySource source = session.entity_source(sc_annotations, plain);
      ScoreOptions options;
      options.mode = session.config().matching_mode;
      options.jobs = session.jobs();
      const ScoreReport report = ScoreOutputs(plain, source, vocab, options);
      std::optional<Histogram> histogram;
      if (sc_histogram) {
        std::vector<std::size_t> counts;
        for (const auto &row : report.per_pair) counts.push_back(row.entity_count);
        histogram = HistogramFromCounts(counts);
      }
      const Histogram *h = histogram ? &*histogram : nullptr;
      internal::WriteText(sc_format == "table" ? RenderTable(report, h)
                                               : ToJson(report, h).dump(2) + "\n",
                          sc_out, out);
      return kExitOk;
    }

    if (st->parsed()) {
      const Dataset input = LoadDataset(st_in);
      internal::WriteData(StripDataset(input, session.vocabulary()), st_out, out);
      return kExitOk;
    }

    if (cmp->parsed()) {
      auto read = [](const std::string &path) {
        std::ifstream f(path);
        if (!f) throw IoError(path + ": cannot open report");
        nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
        if (j.is_discarded()) throw InvalidInput(path + ": malformed JSON");
        return ScoreReportFromJson(j);
      };
      const DeltaTable d = CompareReports(read(cmp_a), read(cmp_b));
      internal::WriteText(cmp_format == "table" ? RenderTable(d) : ToJson(d).dump(2) + "\n",
                          cmp_out, out);
      return kExitOk;
    }
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kDegenerate ? kExitDegenerate : kExitInvalid;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace ecc::cli
