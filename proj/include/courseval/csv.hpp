#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace courseval::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Parses RFC-4180-style CSV: comma separated, double quotes for fields that
/// contain commas, quotes or newlines, doubled quotes as escapes. Accepts
/// both LF and CRLF line endings and strips a UTF-8 BOM. The first record is
/// the header. Throws std::runtime_error on structurally broken input
/// (unterminated quote, ragged row).
Table parse(std::string_view text);

/// Reads and parses a whole file. Throws std::runtime_error if the file
/// cannot be opened.
Table read_file(const std::string& path);

/// Quotes a field if needed for round-tripping.
std::string escape(std::string_view field);

void write_row(std::ostream& os, std::span<const std::string> fields);

} // namespace courseval::csv
