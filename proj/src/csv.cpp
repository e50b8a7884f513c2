#include "courseval/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace courseval::csv {

namespace {

// Splits the raw text into records respecting quoting. Returns false when the
// input is exhausted.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    bool next_record(std::vector<std::string>& out) {
        if (pos_ >= text_.size())
            return false;
        out.clear();
        std::string field;
        bool in_quotes = false;
        bool saw_any = false;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (in_quotes) {
                if (c == '"') {
                    if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                        field.push_back('"');
                        pos_ += 2;
                    } else {
                        in_quotes = false;
                        ++pos_;
                    }
                } else {
                    field.push_back(c);
                    ++pos_;
                }
                continue;
            }
            if (c == '"' && field.empty() && !saw_any_field_char_) {
                in_quotes = true;
                saw_any = true;
                saw_any_field_char_ = true;
                ++pos_;
                continue;
            }
            if (c == ',') {
                out.push_back(std::move(field));
                field.clear();
                saw_any = true;
                saw_any_field_char_ = false;
                ++pos_;
                continue;
            }
            if (c == '\n' || c == '\r') {
                ++pos_;
                if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n')
                    ++pos_;
                out.push_back(std::move(field));
                saw_any_field_char_ = false;
                return true;
            }
            field.push_back(c);
            saw_any = true;
            saw_any_field_char_ = true;
            ++pos_;
        }
        if (in_quotes)
            throw std::runtime_error("csv: unterminated quoted field");
        if (!saw_any && field.empty())
            return false;
        out.push_back(std::move(field));
        saw_any_field_char_ = false;
        return true;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    bool saw_any_field_char_ = false;
};

} // namespace

Table parse(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
        text.remove_prefix(3);

    Table table;
    Reader reader(text);
    std::vector<std::string> record;
    if (!reader.next_record(record))
        throw std::runtime_error("csv: empty input, expected a header row");
    table.header = record;

    std::size_t line = 1;
    while (reader.next_record(record)) {
        ++line;
        // A lone empty record (trailing blank line) is skipped.
        if (record.size() == 1 && record[0].empty())
            continue;
        if (record.size() != table.header.size())
            throw std::runtime_error("csv: row " + std::to_string(line) + " has " +
                                     std::to_string(record.size()) + " fields, header has " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(record);
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes)
        return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (const char c : field) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& os, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << escape(fields[i]);
    }
    os << '\n';
}

} // namespace courseval::csv
