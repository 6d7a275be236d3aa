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

// Configuration files are INI-style key/value sections, which also makes
// simple numeric TOML tables valid input:
//
//   k = 3
//   matching_mode = source-text        # or strict-set
//   cuts = 0.33, 0.66                  # fixed boundaries instead of k
//   gazetteer = gazetteer.tsv
//   abbreviations = abbreviations.txt
//   profiles = profiles.toml
//   jobs = 8
//   max_per_profile = 10000
//
//   [codes]
//   faithfulness = FF-low, FF-mid, FF-high
//   targets = xsum, pubmed
//
//   [profile.xsum]                     # may also live in the profiles file
//   summary_sents = 1
//   doc_sents = 5
//   abstractiveness = 0.55
//   tolerance = 0.05
//   max_pairs = 10000
//
// In a profiles file each section is one profile; the "profile." prefix is
// optional there. Relative paths resolve against the file's directory.

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ecc/error.hpp"
#include "ecc/metrics.hpp"
#include "ecc/wikigen.hpp"

namespace ecc {

struct Config {
  int k = 3;
  std::vector<std::string> faithfulness_names;
  std::vector<std::string> targets;
  MatchMode matching_mode = MatchMode::kSourceText;
  std::optional<std::vector<double>> fixed_cuts;
  std::optional<std::string> gazetteer_path;
  std::optional<std::string> abbreviations_path;
  std::vector<TargetProfile> profiles;
  std::optional<unsigned> jobs;
  std::size_t max_per_profile = 0;
};

namespace internal {

inline std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Drops a trailing " # comment" or " ; comment" outside quotes.
inline std::string StripComment(std::string s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if ((c == '#' || c == ';') && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
      return s.substr(0, i);
    }
  }
  return s;
}

inline std::string Unquote(std::string s) {
  s = Trim(StripComment(std::move(s)));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

// "a, b" or TOML-style ["a", "b"].
inline std::vector<std::string> SplitList(std::string s) {
  s = Trim(StripComment(std::move(s)));
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = Unquote(s.substr(pos, comma - pos));
    if (!item.empty()) out.push_back(std::move(item));
    pos = comma + 1;
  }
  return out;
}

inline double ParseDouble(const std::string &text, const std::string &what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw InvalidInput(what + ": expected a number, got \"" + text + "\"");
  }
}

inline long long ParseInt(const std::string &text, const std::string &what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception &) {
    throw InvalidInput(what + ": expected an integer, got \"" + text + "\"");
  }
}

inline std::size_t ParseCount(const std::string &text, const std::string &what) {
  const long long v = ParseInt(text, what);
  if (v < 0) throw InvalidInput(what + ": must be non-negative");
  return static_cast<std::size_t>(v);
}

inline std::string ResolvePath(const std::filesystem::path &base, const std::string &value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p.string() : (base / p).lexically_normal().string();
}

inline boost::property_tree::ptree ReadIni(const std::string &path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error &e) {
    if (!std::filesystem::exists(path)) throw IoError(path + ": cannot open config");
    throw InvalidInput(e.what());
  }
  return tree;
}

inline TargetProfile ParseProfile(const std::string &name,
                                  const boost::property_tree::ptree &section,
                                  const std::string &where) {
  TargetProfile p;
  p.name = name;
  std::set<std::string> seen;
  for (const auto &[key, node] : section) {
    const std::string value = Unquote(node.data());
    const std::string what = where + ": profile " + name + "." + key;
    if (key == "summary_sents") {
      p.summary_sents = ParseCount(value, what);
    } else if (key == "doc_sents") {
      p.doc_sents = ParseCount(value, what);
    } else if (key == "abstractiveness") {
      p.abstractiveness = ParseDouble(value, what);
    } else if (key == "tolerance") {
      p.tolerance = ParseDouble(value, what);
    } else if (key == "max_pairs") {
      p.max_pairs = ParseCount(value, what);
    } else if (key == "name") {
      if (value != name) throw InvalidInput(what + ": does not match section name");
    } else {
      throw InvalidInput(where + ": profile " + name + ": unknown key " + key);
    }
    seen.insert(key);
  }
  for (const char *required : {"summary_sents", "doc_sents", "abstractiveness"}) {
    if (!seen.count(required)) {
      throw InvalidInput(where + ": profile " + name + ": missing " + required);
    }
  }
  try {
    p.Validate();
  } catch (const Error &e) {
    throw InvalidInput(where + ": " + e.what());
  }
  return p;
}

}  // namespace internal

inline std::vector<TargetProfile> LoadProfiles(const std::string &path) {
  const auto tree = internal::ReadIni(path);
  std::vector<TargetProfile> profiles;
  for (const auto &[section, node] : tree) {
    if (node.empty()) {
      throw InvalidInput(path + ": key \"" + section + "\" outside a profile section");
    }
    std::string name = section.rfind("profile.", 0) == 0 ? section.substr(8) : section;
    profiles.push_back(internal::ParseProfile(name, node, path));
  }
  return profiles;
}

inline Config LoadConfig(const std::string &path) {
  const auto tree = internal::ReadIni(path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  Config c;
  for (const auto &[key, node] : tree) {
    if (!node.empty()) {
      if (key == "codes") {
        for (const auto &[ckey, cnode] : node) {
          if (ckey == "faithfulness") {
            c.faithfulness_names = internal::SplitList(cnode.data());
          } else if (ckey == "targets") {
            c.targets = internal::SplitList(cnode.data());
          } else {
            throw InvalidInput(path + ": unknown key codes." + ckey);
          }
        }
      } else if (key.rfind("profile.", 0) == 0) {
        c.profiles.push_back(internal::ParseProfile(key.substr(8), node, path));
      } else {
        throw InvalidInput(path + ": unknown section [" + key + "]");
      }
      continue;
    }
    const std::string value = internal::Unquote(node.data());
    const std::string what = path + ": " + key;
    if (key == "k") {
      c.k = static_cast<int>(internal::ParseInt(value, what));
    } else if (key == "matching_mode") {
      c.matching_mode = ParseMatchMode(value);
    } else if (key == "cuts") {
      std::vector<double> cuts;
      for (const auto &item : internal::SplitList(node.data())) {
        cuts.push_back(internal::ParseDouble(item, what));
      }
      c.fixed_cuts = std::move(cuts);
    } else if (key == "gazetteer") {
      c.gazetteer_path = internal::ResolvePath(base, value);
    } else if (key == "abbreviations") {
      c.abbreviations_path = internal::ResolvePath(base, value);
    } else if (key == "profiles") {
      for (auto &p : LoadProfiles(internal::ResolvePath(base, value))) {
        c.profiles.push_back(std::move(p));
      }
    } else if (key == "jobs") {
      c.jobs = static_cast<unsigned>(internal::ParseCount(value, what));
    } else if (key == "max_per_profile") {
      c.max_per_profile = internal::ParseCount(value, what);
    } else {
      throw InvalidInput(path + ": unknown key " + key);
    }
  }
  return c;
}

}  // namespace ecc
