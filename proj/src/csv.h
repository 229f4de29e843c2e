// Copyright 2026 The sonovib Authors. All Rights Reserved.
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

// Minimal RFC 4180 style CSV reading and writing shared by the manifest and
// ratings loaders.

#ifndef SONOVIB_SRC_CSV_H_
#define SONOVIB_SRC_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace sonovib::csv {

struct Row {
  std::size_t line = 0;  // 1-based source line
  std::vector<std::string> fields;
};

// Splits text into rows. Quoted fields may contain commas, doubled quotes
// and newlines. Blank lines are skipped; trailing CR is dropped.
std::vector<Row> parse(std::string_view text);

std::string quote(std::string_view field);

std::string read_file(const std::string& path);

}  // namespace sonovib::csv

#endif  // SONOVIB_SRC_CSV_H_
