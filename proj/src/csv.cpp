#include "rpca/csv.hpp"

#include "rpca/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace rpca {

namespace {

// one logical CSV record; handles quoted fields and escaped quotes
std::vector<std::string> split_record(const std::string& line, char delimiter,
                                      std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == delimiter) {
            fields.push_back(field);
            field.clear();
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            field += c;
        }
    }
    if (in_quotes)
        throw ParseError("line " + std::to_string(line_no) + ": unterminated quote",
                         line_no);
    fields.push_back(field);
    return fields;
}

std::string trimmed(const std::string& s) {
    auto b = s.begin(), e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
}

bool is_na_token(const std::string& s) {
    if (s.empty()) return true;
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower == "na" || lower == "nan" || lower == "n/a" || lower == "null";
}

} // namespace

CsvResult parse_csv(const std::string& text, const CsvOptions& options) {
    CsvResult result;
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;

    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(stream, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        std::vector<std::string> fields = split_record(line, options.delimiter, line_no);
        if (options.header && !saw_header) {
            saw_header = true;
            for (auto& f : fields) result.column_names.push_back(trimmed(f));
            width = fields.size();
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(width) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        std::vector<double> row;
        row.reserve(width);
        bool has_na = false;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const std::string cell = trimmed(fields[j]);
            if (is_na_token(cell)) {
                if (options.na_policy == CsvOptions::NaPolicy::reject)
                    throw ParseError("line " + std::to_string(line_no) +
                                         ": missing value in column " +
                                         std::to_string(j + 1),
                                     line_no);
                has_na = true;
                break;
            }
            try {
                std::size_t consumed = 0;
                const double value = std::stod(cell, &consumed);
                if (consumed != cell.size())
                    throw std::invalid_argument(cell);
                row.push_back(value);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(line_no) +
                                     ": cannot parse '" + cell + "' in column " +
                                     std::to_string(j + 1),
                                 line_no);
            }
        }
        if (has_na) {
            ++result.dropped_rows;
            continue;
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty())
        throw ParseError("no data rows", line_no);
    result.X.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            result.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    if (result.dropped_rows > 0)
        std::cerr << "note: dropped " << result.dropped_rows
                  << " rows with missing values\n";
    return result;
}

CsvResult load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw InvalidArgumentError("load_csv: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_csv(buffer.str(), options);
}

} // namespace rpca
