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

// Dataset model and the JSON-lines record format:
//
//   {"id": str, "codes": [str], "document": str, "reference_summary": str?,
//    "hypothesis": str?, "meta": {str: str}}
//
// Records are written with exactly this field order. Optional summaries are
// omitted when absent; codes and meta are always emitted. Unknown top-level
// fields on input are folded into meta (non-string values as compact JSON).
// All text is NFC-normalized on load.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "ecc/control_code.hpp"
#include "ecc/error.hpp"
#include "ecc/unicode.hpp"

namespace ecc {

struct Pair {
  std::string id;
  std::string document;
  std::optional<std::string> reference_summary;
  std::optional<std::string> hypothesis;
  std::vector<std::string> codes;
  std::map<std::string, std::string> meta;

  bool operator==(const Pair &) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Pair> pairs;

  bool operator==(const Dataset &) const = default;
};

enum class TextField { kDocument, kReferenceSummary, kHypothesis };

inline std::string_view FieldName(TextField field) {
  switch (field) {
    case TextField::kDocument: return "document";
    case TextField::kReferenceSummary: return "reference_summary";
    case TextField::kHypothesis: return "hypothesis";
  }
  return "";
}

inline std::optional<TextField> ParseFieldName(std::string_view name) {
  if (name == "document") return TextField::kDocument;
  if (name == "reference_summary") return TextField::kReferenceSummary;
  if (name == "hypothesis") return TextField::kHypothesis;
  return std::nullopt;
}

inline std::optional<std::string_view> GetField(const Pair &pair,
                                               TextField field) {
  switch (field) {
    case TextField::kDocument: return pair.document;
    case TextField::kReferenceSummary:
      if (pair.reference_summary) return *pair.reference_summary;
      return std::nullopt;
    case TextField::kHypothesis:
      if (pair.hypothesis) return *pair.hypothesis;
      return std::nullopt;
  }
  return std::nullopt;
}

namespace internal {

inline bool IsBlank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

inline bool IsBlankUnicode(std::string_view s) {
  for (char32_t c : unicode::Decode(s)) {
    if (!unicode::IsSpace(c)) return false;
  }
  return true;
}

inline Pair ParseRecord(const nlohmann::json &j, const std::string &where) {
  if (!j.is_object()) throw InvalidInput(where + ": record is not a JSON object");
  auto require_string = [&](const char *key) -> std::string {
    auto it = j.find(key);
    if (it == j.end()) throw InvalidInput(where + ": missing field " + key);
    if (!it->is_string()) {
      throw InvalidInput(where + ": field " + key + " is not a string");
    }
    return unicode::ToNfc(it->get<std::string>());
  };
  auto optional_string = [&](const char *key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
      throw InvalidInput(where + ": field " + key + " is not a string");
    }
    return unicode::ToNfc(it->get<std::string>());
  };

  Pair pair;
  pair.id = require_string("id");
  if (pair.id.empty()) throw InvalidInput(where + ": empty id");
  pair.document = require_string("document");
  if (IsBlankUnicode(pair.document)) {
    throw InvalidInput(where + ": empty document");
  }
  pair.reference_summary = optional_string("reference_summary");
  pair.hypothesis = optional_string("hypothesis");

  if (auto it = j.find("codes"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw InvalidInput(where + ": codes is not an array");
    for (const auto &code : *it) {
      if (!code.is_string() || !IsControlCodeToken(code.get<std::string>())) {
        throw InvalidInput(where + ": invalid control code " + code.dump());
      }
      pair.codes.push_back(code.get<std::string>());
    }
  }
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw InvalidInput(where + ": meta is not an object");
    for (const auto &[key, value] : it->items()) {
      if (!value.is_string()) {
        throw InvalidInput(where + ": meta." + key + " is not a string");
      }
      pair.meta[key] = value.get<std::string>();
    }
  }
  for (const auto &[key, value] : j.items()) {
    if (key == "id" || key == "document" || key == "reference_summary" ||
        key == "hypothesis" || key == "codes" || key == "meta") {
      continue;
    }
    if (pair.meta.count(key)) {
      throw InvalidInput(where + ": field " + key + " duplicates a meta entry");
    }
    pair.meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return pair;
}

}  // namespace internal

inline nlohmann::ordered_json ToJson(const Pair &pair) {
  nlohmann::ordered_json j;
  j["id"] = pair.id;
  j["codes"] = pair.codes;
  j["document"] = pair.document;
  if (pair.reference_summary) j["reference_summary"] = *pair.reference_summary;
  if (pair.hypothesis) j["hypothesis"] = *pair.hypothesis;
  j["meta"] = nlohmann::ordered_json::object();
  for (const auto &[key, value] : pair.meta) j["meta"][key] = value;
  return j;
}

// Reads a JSON-lines dataset. Blank lines are skipped; line numbers in
// errors are 1-based physical line numbers.
inline Dataset LoadDataset(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open dataset");
  Dataset dataset;
  dataset.name = std::filesystem::path(path).stem().string();
  std::unordered_map<std::string, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::IsBlank(line)) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw InvalidInput(path + ": " + where + ": malformed JSON (" + e.what() + ")");
    }
    Pair pair;
    try {
      pair = internal::ParseRecord(j, where);
    } catch (const Error &e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
    auto [it, inserted] = seen.emplace(pair.id, line_no);
    if (!inserted) {
      throw InvalidInput(path + ": duplicate id \"" + pair.id + "\" at lines " +
                         std::to_string(it->second) + " and " +
                         std::to_string(line_no));
    }
    dataset.pairs.push_back(std::move(pair));
  }
  if (in.bad()) throw IoError(path + ": read error");
  return dataset;
}

inline void WriteDataset(const Dataset &dataset, std::ostream &out) {
  for (const Pair &pair : dataset.pairs) out << ToJson(pair).dump() << '\n';
}

inline void WriteDataset(const Dataset &dataset, const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  WriteDataset(dataset, out);
  out.flush();
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace ecc
