// Copyright 2026 The wpe Authors
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


#ifndef WPE_REPORT_H_
#define WPE_REPORT_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace wpe {

using Json = nlohmann::ordered_json;

// SHA-1 of "blob <size>\0" + content, as hex; what `git hash-object` prints.
std::string git_blob_hash(const std::string& content);

// Hash of the compact dump of `inputs`.
std::string content_hash(const Json& inputs);

// Pretty dump with a trailing newline; key order is insertion order.
std::string dump_report(const Json& report);

void write_text(const std::string& path, const std::string& text);

// Writes a header line and rows; numbers at 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace wpe

#endif  // WPE_REPORT_H_
