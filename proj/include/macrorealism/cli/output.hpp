#pragma once

// Text output shared by every command: numbers at 9 significant digits,
// CSV with optional "# key: value" preamble lines, and JSON records of the
// form {"meta": ..., "data": ...}.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace macrorealism::cli {

using Json = nlohmann::ordered_json;

/// printf "%.9g"; non-finite values print as nan, inf, -inf.
std::string format_number(double value);
std::string format_bool(bool value);

/// A CSV document. Cells are stored as already-formatted text.
struct Table {
  std::vector<std::string> comments;  // preamble lines without the "# " prefix
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

/// Comma-separated, LF line endings. Cells containing a comma, quote or
/// line break are quoted with doubled inner quotes.
std::string to_csv(const Table& table);

/// Inverse of to_csv. Throws std::invalid_argument on malformed input
/// (unterminated quote, ragged rows, missing header, CR line endings).
Table parse_csv(std::string_view text);

/// JSON number rounded to the 9 digits the text output carries.
Json json_number(double value);

/// Converts a formatted cell back to JSON: numbers become numbers, the
/// literals true/false become booleans, everything else stays a string.
Json cell_to_json(const std::string& cell);

/// Array of row objects keyed by the header.
Json rows_to_json(const Table& table);

/// Flattens scalar meta entries into "key: value" preamble lines; nested
/// objects use dotted keys.
std::vector<std::string> meta_to_comments(const Json& meta);

enum class Format { Csv, Json };

struct Record {
  Json meta = Json::object();
  Table table;
  /// Overrides rows_to_json(table) as the JSON payload when set.
  Json data;

  std::string render(Format format) const;
};

}  // namespace macrorealism::cli
