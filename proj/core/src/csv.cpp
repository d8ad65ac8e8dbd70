#include "passprob/csv.hpp"

#include <charconv>
#include <cstdio>

namespace passprob::csv {

bool Reader::next(std::vector<std::string>& row) {
    row.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in_.get()) != EOF) {
        any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(static_cast<char>(c));
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            return true;
        } else if (c == '\r') {
            // swallow; LF (if any) terminates the record
            if (in_.peek() == '\n') in_.get();
            row.push_back(std::move(field));
            return true;
        } else {
            field.push_back(static_cast<char>(c));
        }
    }
    if (!any) return false;
    row.push_back(std::move(field));
    return true;
}

Table::Table(std::istream& in, const std::vector<std::string>& required, const std::string& table_name)
    : reader_(in), table_name_(table_name) {
    std::vector<std::string> header;
    if (!reader_.next(header)) {
        throw SchemaError(table_name_ + ": empty file, no header row");
    }
    // Strip a UTF-8 BOM if present.
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) {
        header[0].erase(0, 3);
    }
    for (std::size_t i = 0; i < header.size(); ++i) index_[header[i]] = i;
    for (const auto& col : required) {
        if (!index_.count(col)) {
            throw SchemaError(table_name_ + ": missing required column '" + col + "'");
        }
    }
}

bool Table::next() {
    ++line_;
    return reader_.next(row_);
}

const std::string& Table::get(const std::string& column) const {
    auto it = index_.find(column);
    if (it == index_.end()) {
        throw SchemaError(table_name_ + ": missing required column '" + column + "'");
    }
    static const std::string empty;
    if (it->second >= row_.size()) return empty;
    return row_[it->second];
}

bool Table::has(const std::string& column) const { return index_.count(column) != 0; }

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace passprob::csv
