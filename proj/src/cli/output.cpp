#include "macrorealism/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace macrorealism::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string format_bool(bool value) { return value ? "true" : "false"; }

namespace {

bool needs_quotes(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
  if (!needs_quotes(cell)) {
    out += cell;
    return;
  }
  out += '"';
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += ',';
    append_cell(out, row[i]);
  }
  out += '\n';
}

/// Splits one record starting at pos; advances pos past its newline.
std::vector<std::string> parse_record(std::string_view text, std::size_t& pos) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  while (pos < text.size()) {
    const char ch = text[pos++];
    if (quoted) {
      if (ch == '"') {
        if (pos < text.size() && text[pos] == '"') {
          cell += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"' && cell.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
      was_quoted = false;
    } else if (ch == '\n') {
      cells.push_back(std::move(cell));
      return cells;
    } else if (ch == '\r') {
      throw std::invalid_argument("CSV must use LF line endings");
    } else {
      cell += ch;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV cell");
  throw std::invalid_argument("CSV record is missing its final line feed");
}

std::string scalar_text(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_number(value.get<double>());
  return value.dump();
}

void flatten(const Json& meta, const std::string& prefix, std::vector<std::string>& out) {
  for (auto it = meta.begin(); it != meta.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out.push_back(key + ": " + scalar_text(*it));
    }
  }
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (const auto& c : table.comments) {
    if (c.find('\n') != std::string::npos) {
      throw std::invalid_argument("CSV comment lines cannot contain line breaks");
    }
    out += "# ";
    out += c;
    out += '\n';
  }
  append_row(out, table.header);
  for (const auto& row : table.rows) append_row(out, row);
  return out;
}

Table parse_csv(std::string_view text) {
  Table table;
  std::size_t pos = 0;
  while (pos < text.size() && text.substr(pos, 2) == "# ") {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      throw std::invalid_argument("CSV comment is missing its final line feed");
    }
    table.comments.emplace_back(text.substr(pos + 2, end - pos - 2));
    pos = end + 1;
  }
  if (pos >= text.size()) throw std::invalid_argument("CSV has no header row");
  table.header = parse_record(text, pos);
  while (pos < text.size()) {
    auto row = parse_record(text, pos);
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("CSV row width " + std::to_string(row.size()) +
                                  " does not match header width " +
                                  std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Json cell_to_json(const std::string& cell) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  if (!cell.empty()) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() + cell.size() && std::isfinite(v)) return v;
  }
  return cell;
}

Json json_number(double value) { return cell_to_json(format_number(value)); }

Json rows_to_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      obj[table.header[i]] = cell_to_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::vector<std::string> meta_to_comments(const Json& meta) {
  std::vector<std::string> out;
  flatten(meta, "", out);
  return out;
}

std::string Record::render(Format format) const {
  if (format == Format::Csv) {
    Table t = table;
    t.comments = meta_to_comments(meta);
    return to_csv(t);
  }
  Json doc = Json::object();
  doc["meta"] = meta;
  doc["data"] = data.is_null() ? rows_to_json(table) : data;
  return doc.dump(2) + "\n";
}

}  // namespace macrorealism::cli
