//
// Copyright 2026 The Unicloak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef UNICLOAK_UTF8_H_
#define UNICLOAK_UTF8_H_

#include <string>
#include <string_view>

namespace unicloak {

// Code point used in place of malformed UTF-8 sequences.
inline constexpr char32_t kReplacementChar = U'\uFFFD';

// Decodes UTF-8 into Unicode scalar values. Malformed or overlong sequences
// and encoded surrogates decode to U+FFFD, one per offending byte.
std::u32string DecodeUtf8(std::string_view bytes);

// Encodes scalar values as UTF-8. Values that are not scalar values
// (surrogates, > U+10FFFF) are encoded as U+FFFD.
std::string EncodeUtf8(std::u32string_view text);
void AppendUtf8(char32_t c, std::string& out);

// Number of scalar values in a UTF-8 string.
size_t CodePointLength(std::string_view bytes);

// "U+202E" style label.
std::string CodePointLabel(char32_t c);

std::string AsciiLowercase(std::string_view s);
std::string_view TrimAsciiWhitespace(std::string_view s);

}  // namespace unicloak

#endif  // UNICLOAK_UTF8_H_
