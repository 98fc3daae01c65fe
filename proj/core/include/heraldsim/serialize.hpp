// Copyright 2026 The heraldsim Authors
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

#include <string>
#include <string_view>

#include <json.hpp>

#include "heraldsim/hilbert.hpp"

namespace heraldsim {

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

/// Parses a JSON document; syntax errors become ConfigError with line and
/// column in the message.
nlohmann::json parse_json(std::string_view text, const std::string& source = "<input>");
nlohmann::json load_json_file(const std::string& path);

/// Applies `key=value` to a JSON object. The value is parsed as JSON when
/// possible (numbers, booleans, lists), otherwise taken as a string. Dotted
/// keys address nested objects.
void apply_override(nlohmann::json& j, const std::string& assignment);

/// {"re": [...], "im": [...]} row-major.
nlohmann::json matrix_to_json(const CMatrix& m);

}  // namespace heraldsim
