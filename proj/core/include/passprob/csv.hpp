#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "passprob/errors.hpp"

namespace passprob::csv {

// Streaming RFC-4180-ish reader: quoted fields, embedded commas/newlines,
// CRLF tolerant. One row in memory at a time.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads one record; returns false at EOF.
    bool next(std::vector<std::string>& row);

private:
    std::istream& in_;
};

// Header-aware reader for the tabular inputs.
class Table {
public:
    // Reads the header row immediately; `required` columns must be present.
    Table(std::istream& in, const std::vector<std::string>& required, const std::string& table_name);

    bool next();

    const std::string& get(const std::string& column) const;
    bool has(const std::string& column) const;
    const std::vector<std::string>& row() const { return row_; }
    std::size_t line() const { return line_; }

private:
    Reader reader_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::string> row_;
    std::string table_name_;
    std::size_t line_ = 1;
};

std::string quote(const std::string& field);

// Formats a double with round-trip precision, no trailing noise.
std::string fmt(double v);

}  // namespace passprob::csv
