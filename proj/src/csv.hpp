// SPDX-License-Identifier: Apache-2.0
//
// holo - holographic MIMO channel synthesis and capacity evaluation
// Copyright (C) 2026 The holo authors
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

// Minimal reader for the numeric CSV inputs (CDL tables, patterns, S-parameters).

#ifndef HOLO_SRC_CSV_HPP
#define HOLO_SRC_CSV_HPP

#include "holo/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace holo::detail
{
    struct NumericCsv
    {
        std::vector<std::vector<double>> rows;
        std::vector<std::size_t> line_numbers;
    };

    inline std::string_view trim(std::string_view s)
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    inline std::vector<std::string_view> split_commas(std::string_view line)
    {
        std::vector<std::string_view> out;
        std::size_t start = 0;
        while (true)
        {
            const auto pos = line.find(',', start);
            out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        return out;
    }

    inline bool parse_double(std::string_view text, double &value)
    {
        if (text.empty())
            return false;
        if (text.front() == '+')
            text.remove_prefix(1);
        const auto *end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, value);
        return res.ec == std::errc() && res.ptr == end;
    }

    // Reads a CSV whose first line must equal `header` exactly (after trimming).
    // Blank lines are skipped. `malformed` is the error code used for format errors.
    inline NumericCsv read_numeric_csv(const std::string &path, std::string_view header, ErrorCode malformed)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

        NumericCsv out;
        std::string line;
        std::size_t line_no = 0;
        bool have_header = false;
        const auto expected = split_commas(header);
        while (std::getline(in, line))
        {
            ++line_no;
            std::string_view view = trim(line);
            if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF")
                view.remove_prefix(3);
            if (view.empty())
                continue;
            if (!have_header)
            {
                if (split_commas(view) != expected)
                    throw Error(malformed, path + ": expected header '" + std::string(header) + "'");
                have_header = true;
                continue;
            }
            const auto fields = split_commas(view);
            if (fields.size() != expected.size())
                throw Error(malformed, path + ":" + std::to_string(line_no) + ": expected " +
                                           std::to_string(expected.size()) + " fields");
            std::vector<double> values(fields.size());
            for (std::size_t i = 0; i < fields.size(); ++i)
                if (!parse_double(fields[i], values[i]) || !std::isfinite(values[i]))
                    throw Error(malformed, path + ":" + std::to_string(line_no) + ": bad number '" +
                                               std::string(fields[i]) + "'");
            out.rows.push_back(std::move(values));
            out.line_numbers.push_back(line_no);
        }
        if (!have_header)
            throw Error(ErrorCode::EmptyFile, path + " is empty");
        return out;
    }

    // Shortest text that reads back to the same double.
    inline std::string format_shortest(double v)
    {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    inline bool is_integral(double v) { return std::floor(v) == v && std::abs(v) < 9.0e15; }
}

#endif
