/*
 * Copyright 2026 The cmca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cmca::csv {

using Record = std::vector<std::string>;

/// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
/// line breaks, CRLF or LF record terminators. A UTF-8 BOM is skipped.
std::vector<Record> read(std::istream& in);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Shortest-stable round-trip text for a double ("%.17g"); -0 prints as 0.
std::string format_number(double value);

void write_record(std::string& out, const Record& fields);

} // namespace cmca::csv
