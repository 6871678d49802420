#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quip::csv {

// Minimal RFC-4180 reader/writer: comma separated, double-quote quoting,
// quotes escaped by doubling, CRLF tolerated. UTF-8 passes through.

std::vector<std::vector<std::string>> read(std::istream& in);
std::vector<std::vector<std::string>> read_file(const std::string& path);

std::string escape_field(const std::string& field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace quip::csv
