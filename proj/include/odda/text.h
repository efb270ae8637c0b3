//
// Copyright 2026 The ODDA Authors
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

#ifndef ODDA_TEXT_H_
#define ODDA_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace odda {

// ASCII lowercasing; bytes >= 0x80 pass through unchanged.
std::string Lowercase(std::string_view s);

// Whitespace split, lowercase, ASCII punctuation removed. Tokens that become
// empty are dropped.
std::vector<std::string> Tokenize(std::string_view text);

std::string JoinTokens(std::span<const std::string> tokens);

}  // namespace odda

#endif  // ODDA_TEXT_H_
