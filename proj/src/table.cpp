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

#include "trofdm/table.hpp"
#include "trofdm/types.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trofdm
{
    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void Table::add_row(std::vector<Cell> row)
    {
        if (row.size() != columns.size())
            throw std::logic_error("table row has " + std::to_string(row.size()) + " cells, expected " +
                                   std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }

    std::size_t Table::column_index(const std::string &name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i].name == name)
                return i;
        throw std::out_of_range("no column named " + name);
    }

    const Cell &Table::at(std::size_t row, const std::string &column) const
    {
        return rows.at(row).at(column_index(column));
    }

    double Table::number(std::size_t row, const std::string &column) const
    {
        const Cell &c = at(row, column);
        if (const auto *d = std::get_if<double>(&c))
            return *d;
        if (const auto *i = std::get_if<std::int64_t>(&c))
            return static_cast<double>(*i);
        throw std::invalid_argument("column " + column + " is not numeric");
    }

    namespace
    {
        std::string csv_cell(const Cell &c)
        {
            if (const auto *d = std::get_if<double>(&c))
                return format_double(*d);
            if (const auto *i = std::get_if<std::int64_t>(&c))
                return std::to_string(*i);
            const auto &s = std::get<std::string>(c);
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s)
            {
                if (ch == '"')
                    q += '"';
                q += ch;
            }
            return q + "\"";
        }

        // nlohmann's own float printer is shortest-round-trip; numbers go in as raw text
        // so JSON and CSV carry the same digits.
        std::string json_cell(const Cell &c)
        {
            if (const auto *d = std::get_if<double>(&c))
                return std::isfinite(*d) ? format_double(*d) : "null";
            if (const auto *i = std::get_if<std::int64_t>(&c))
                return std::to_string(*i);
            return nlohmann::json(std::get<std::string>(c)).dump();
        }
    }

    std::string Table::to_csv() const
    {
        std::ostringstream os;
        bool first = true;
        for (const auto &col : columns)
        {
            if (!col.in_csv)
                continue;
            os << (first ? "" : ",") << col.name;
            first = false;
        }
        os << '\n';
        for (const auto &row : rows)
        {
            first = true;
            for (std::size_t i = 0; i < columns.size(); ++i)
            {
                if (!columns[i].in_csv)
                    continue;
                os << (first ? "" : ",") << csv_cell(row[i]);
                first = false;
            }
            os << '\n';
        }
        return os.str();
    }

    std::string Table::to_json() const
    {
        std::ostringstream os;
        os << "{\n  \"meta\": {";
        bool first = true;
        for (const auto &[k, v] : meta_json)
        {
            os << (first ? "\n" : ",\n") << "    " << nlohmann::json(k).dump() << ": " << v;
            first = false;
        }
        os << (first ? "}" : "\n  }") << ",\n  \"columns\": [";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? ", " : "") << nlohmann::json(columns[i].name).dump();
        os << "],\n  \"rows\": [";
        for (std::size_t r = 0; r < rows.size(); ++r)
        {
            os << (r ? ",\n" : "\n") << "    {";
            for (std::size_t i = 0; i < columns.size(); ++i)
                os << (i ? ", " : "") << nlohmann::json(columns[i].name).dump() << ": " << json_cell(rows[r][i]);
            os << "}";
        }
        os << (rows.empty() ? "]" : "\n  ]") << "\n}\n";
        return os.str();
    }

    void write_text_file(const std::string &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + path + "' for writing");
        out << text;
        out.flush();
        if (!out)
            throw IoError("failed writing '" + path + "'");
    }
}
