/*
 * Copyright 2026 The pinvsm-sim Authors
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

#include <string>
#include <vector>

#include "pinvsm/bytes.hpp"
#include "pinvsm/error.hpp"

namespace pinvsm {

/// A header row plus rows of unsigned integer cells.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<Value>> rows;
};

inline void check_table(const Table& table, Granularity g) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.headers.size()) {
      fail(Errc::Ragged, "row " + std::to_string(r) + " has " + std::to_string(table.rows[r].size()) + " cells, expected " +
                             std::to_string(table.headers.size()));
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
      if (!representable(table.rows[r][c], g)) {
        fail(Errc::Overflow, "cell (" + std::to_string(r) + ", " + std::to_string(c) + ") = " +
                                 std::to_string(table.rows[r][c]) + " does not fit in " + std::to_string(width(g)) + " byte(s)");
      }
    }
  }
}

}  // namespace pinvsm
