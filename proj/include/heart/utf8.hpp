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

#ifndef HEART_UTF8_HPP_
#define HEART_UTF8_HPP_

#include <cstddef>
#include <string>
#include <string_view>

namespace heart::utf8 {

// Byte length of the sequence introduced by `lead`.
std::size_t sequence_length(unsigned char lead);

// Number of Unicode scalar values in a UTF-8 string. Invalid lead bytes
// count as one character each.
std::size_t length(std::string_view text);

// Byte offset of the character at index `chars`; clamps to text.size().
std::size_t byte_offset(std::string_view text, std::size_t chars);

// Characters [begin, end) of `text`.
std::string slice(std::string_view text, std::size_t begin, std::size_t end);

// Encodes one scalar value; returns false for surrogates or out-of-range.
bool append(std::string& out, char32_t code_point);

// True when the bytes form valid UTF-8.
bool valid(std::string_view text);

}  // namespace heart::utf8

#endif  // HEART_UTF8_HPP_
