// Copyright 2026 The heart-timeline Authors.
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

#ifndef HEART_DIAGNOSTIC_HPP_
#define HEART_DIAGNOSTIC_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace heart {

enum class Severity { Error, Warning };

// A problem found while parsing, validating or building a timeline.
// Locations are character (Unicode scalar) offsets.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::optional<std::size_t> location;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic make_error(std::string code, std::string message,
                             std::optional<std::size_t> location = {}) {
  return {Severity::Error, std::move(code), std::move(message), location};
}

inline Diagnostic make_warning(std::string code, std::string message,
                               std::optional<std::size_t> location = {}) {
  return {Severity::Warning, std::move(code), std::move(message), location};
}

inline bool has_error(const Diagnostics& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

const char* to_string(Severity severity);

}  // namespace heart

#endif  // HEART_DIAGNOSTIC_HPP_
