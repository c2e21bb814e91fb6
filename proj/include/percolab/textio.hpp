#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace percolab {

std::string format_double(double v);

/// Minimal CSV assembly with a fixed header; all experiment artifacts go
/// through this so column order stays stable.
class CsvBuilder {
public:
    explicit CsvBuilder(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    const std::string& str() const { return body_; }
    std::size_t rows() const { return rows_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string body_;
};

/// Writes content to a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial artifact behind.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// One parsed `key = value` entry from a flat key-value file. `section` is
/// the enclosing [section] header, empty before the first header.
struct KeyValueEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

/// Parses flat key-value text: `key = value` lines, optional [section]
/// headers, `#` comments, blank lines ignored. Keys may repeat (used for
/// enumerated table rows).
std::vector<KeyValueEntry> parse_key_value_text(const std::string& text);

std::vector<std::string> split_fields(const std::string& s);

std::optional<double> parse_double(const std::string& s);
std::optional<long long> parse_int(const std::string& s);

}  // namespace percolab
