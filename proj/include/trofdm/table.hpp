// SPDX-License-Identifier: Apache-2.0
//
// trofdm: frequency-domain time-reversal MISO-OFDM simulation and NMSE analysis
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Row-oriented result table written as CSV or JSON. Numbers are printed with 17
// significant digits so files round-trip exactly and are byte-identical across runs.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace trofdm
{
    using Cell = std::variant<double, std::int64_t, std::string>;

    struct Column
    {
        std::string name;
        bool in_csv = true; // false: emitted only in JSON output
    };

    struct Table
    {
        std::vector<Column> columns;
        std::vector<std::vector<Cell>> rows;
        std::map<std::string, std::string> meta_json; // extra top-level JSON members (already serialized)

        void add_row(std::vector<Cell> row);
        std::size_t column_index(const std::string &name) const;
        const Cell &at(std::size_t row, const std::string &column) const;
        double number(std::size_t row, const std::string &column) const;

        std::string to_csv() const;
        /// {"meta": {...}, "columns": [...], "rows": [{...}, ...]}
        std::string to_json() const;
    };

    std::string format_double(double v);

    /// Writes `text` to `path`; IoError naming the path on failure.
    void write_text_file(const std::string &path, const std::string &text);
}
