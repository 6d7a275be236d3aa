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

#include <optional>
#include <string>
#include <string_view>

#include "ecc/error.hpp"

namespace ecc {

enum class CodeKind { kFaithfulness, kTarget };

// "<" NAME ">" with NAME in [A-Za-z0-9-]+.
inline bool MatchesCodeGrammar(std::string_view token) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>') return false;
  for (char c : token.substr(1, token.size() - 2)) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-';
    if (!ok) return false;
  }
  return true;
}

inline std::optional<CodeKind> KindOfToken(std::string_view token) {
  if (!MatchesCodeGrammar(token)) return std::nullopt;
  std::string_view name = token.substr(1, token.size() - 2);
  if (name.size() > 3 && name.substr(0, 3) == "FF-") return CodeKind::kFaithfulness;
  if (name.size() > 2 && name.substr(0, 2) == "T-") return CodeKind::kTarget;
  return std::nullopt;
}

// Grammar-valid and carries one of the FF-/T- prefixes.
inline bool IsControlCodeToken(std::string_view token) {
  return KindOfToken(token).has_value();
}

class ControlCode {
 public:
  // Accepts "<FF-high>" or the bare name "FF-high".
  static ControlCode Parse(std::string_view text) {
    std::string token(text);
    if (token.empty() || token.front() != '<') token = "<" + token + ">";
    auto kind = KindOfToken(token);
    if (!kind) {
      throw ParameterError("invalid control code \"" + std::string(text) +
                           "\" (expected <FF-name> or <T-name>)");
    }
    return ControlCode(std::move(token), *kind);
  }

  const std::string &token() const { return token_; }
  CodeKind kind() const { return kind_; }
  std::string_view name() const {
    return std::string_view(token_).substr(1, token_.size() - 2);
  }

  bool operator==(const ControlCode &) const = default;

 private:
  ControlCode(std::string token, CodeKind kind)
      : token_(std::move(token)), kind_(kind) {}

  std::string token_;
  CodeKind kind_;
};

}  // namespace ecc
