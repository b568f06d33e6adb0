#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evoscore::csv {

// RFC 4180 record set: comma delimiter, double-quote quoting, quoted cells
// may contain commas, quotes ("" escape) and newlines. LF and CRLF record
// separators are both accepted; a UTF-8 BOM is stripped. Input must be valid
// UTF-8. Throws std::runtime_error with a record number on malformed input.
std::vector<std::vector<std::string>> parse(std::string_view bytes);

// Quotes the field only when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

// One record, LF-terminated.
std::string write_record(std::span<const std::string> fields);

bool valid_utf8(std::string_view bytes);

}  // namespace evoscore::csv
