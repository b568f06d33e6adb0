#include "evoscore/csv.hpp"

#include <stdexcept>

namespace evoscore::csv {

namespace {

[[noreturn]] void fail(std::size_t record, const std::string& what) {
  throw std::runtime_error("malformed CSV: " + what + " (record " +
                           std::to_string(record) + ")");
}

}  // namespace

bool valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    unsigned min_cp;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
    } else {
      return false;
    }
    if (i + len > n) return false;
    unsigned cp = b0 & (0xFF >> (len + 1));
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (cp < min_cp) return false;                    // overlong
    if (cp > 0x10FFFF) return false;                  // out of range
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;   // surrogate
    i += len;
  }
  return true;
}

std::vector<std::vector<std::string>> parse(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (!valid_utf8(bytes)) {
    throw std::runtime_error("malformed CSV: input is not valid UTF-8");
  }

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t record_no = 1;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  const auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    ++record_no;
  };

  std::size_t i = 0;
  const std::size_t n = bytes.size();
  bool any_char_in_record = false;
  while (i < n) {
    const char c = bytes[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && bytes[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          fail(record_no, "quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        any_char_in_record = true;
        ++i;
        break;
      case ',':
        end_field();
        any_char_in_record = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < n && bytes[i + 1] == '\n') {
          end_record();
          any_char_in_record = false;
          i += 2;
        } else {
          fail(record_no, "bare carriage return");
        }
        break;
      case '\n':
        end_record();
        any_char_in_record = false;
        ++i;
        break;
      default:
        if (field_was_quoted) fail(record_no, "data after closing quote");
        field.push_back(c);
        any_char_in_record = true;
        ++i;
        break;
    }
  }
  if (in_quotes) fail(record_no, "unterminated quoted field");
  if (any_char_in_record || !record.empty()) end_record();
  return records;
}

std::string escape_field(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string write_record(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape_field(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace evoscore::csv
