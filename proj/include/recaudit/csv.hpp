#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "recaudit/error.hpp"

namespace recaudit::csv {

struct Field {
  std::string value;
  std::size_t column = 0;  // 1-based character offset of the field start
};

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<Field> fields;
};

/// RFC 4180 reader: comma delimiter, double-quote quoting with "" escapes,
/// quoted fields may span lines. CRLF and LF line endings, optional UTF-8 BOM.
class Reader {
 public:
  Reader(std::string text, std::string source)
      : text_(std::move(text)), source_(std::move(source)) {
    if (text_.rfind("\xEF\xBB\xBF", 0) == 0) pos_ = 3;
  }

  static Reader from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return Reader(ss.str(), path);
  }

  const std::string& source() const noexcept { return source_; }

  /// Next record, or nullopt at end of input. Blank lines are skipped.
  std::optional<Row> next() {
    while (pos_ < text_.size()) {
      Row row;
      row.line = line_;
      bool blank = parse_record(row);
      if (!blank) return row;
    }
    return std::nullopt;
  }

 private:
  // Returns true when the record was an empty line.
  bool parse_record(Row& row) {
    std::size_t line_start = pos_;
    if (at_eol()) {
      consume_eol();
      return true;
    }
    for (;;) {
      Field f;
      f.column = pos_ - line_start + 1;
      if (pos_ < text_.size() && text_[pos_] == '"') {
        const std::size_t quote_line = line_;
        const std::size_t quote_col = f.column;
        ++pos_;
        for (;;) {
          if (pos_ >= text_.size())
            throw DataError(source_, quote_line, quote_col, "unterminated quoted field");
          char c = text_[pos_];
          if (c == '"') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
              f.value += '"';
              pos_ += 2;
              continue;
            }
            ++pos_;
            break;
          }
          if (c == '\n') {
            ++line_;
            line_start = pos_ + 1;
          }
          f.value += c;
          ++pos_;
        }
        if (pos_ < text_.size() && text_[pos_] != ',' && !at_eol())
          throw DataError(source_, line_, pos_ - line_start + 1,
                          "unexpected character after closing quote");
      } else {
        while (pos_ < text_.size() && text_[pos_] != ',' && !at_eol()) {
          if (text_[pos_] == '"')
            throw DataError(source_, line_, pos_ - line_start + 1,
                            "quote inside unquoted field");
          f.value += text_[pos_++];
        }
      }
      row.fields.push_back(std::move(f));
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      consume_eol();
      break;
    }
    return false;
  }

  bool at_eol() const {
    return pos_ >= text_.size() || text_[pos_] == '\n' ||
           (text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ||
           (text_[pos_] == '\r' && pos_ + 1 == text_.size());
  }

  void consume_eol() {
    if (pos_ < text_.size() && text_[pos_] == '\r') ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    ++line_;
  }

  std::string text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

/// Header-addressed view over a CSV file. The header must contain every
/// required column; optional columns may be absent.
class Table {
 public:
  Table(Reader reader, const std::vector<std::string>& required)
      : source_(reader.source()) {
    auto header = reader.next();
    if (!header) throw DataError(source_, 1, 0, "missing header row");
    for (std::size_t i = 0; i < header->fields.size(); ++i)
      index_[header->fields[i].value] = i;
    for (const auto& name : required)
      if (!index_.count(name))
        throw DataError(source_, 1, 0, "missing column '" + name + "'");
    width_ = header->fields.size();
    while (auto row = reader.next()) {
      if (row->fields.size() != width_)
        throw DataError(source_, row->line, 0,
                        "expected " + std::to_string(width_) + " fields, found " +
                            std::to_string(row->fields.size()));
      rows_.push_back(std::move(*row));
    }
  }

  const std::string& source() const noexcept { return source_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  bool has(const std::string& column) const { return index_.count(column) != 0; }

  const Field& field(const Row& row, const std::string& column) const {
    return row.fields.at(index_.at(column));
  }
  const std::string& get(const Row& row, const std::string& column) const {
    return field(row, column).value;
  }

  /// Raises a DataError positioned at the given cell.
  [[noreturn]] void fail(const Row& row, const std::string& column,
                         const std::string& message) const {
    std::size_t col = has(column) ? field(row, column).column : 0;
    throw DataError(source_, row.line, col, message);
  }

 private:
  std::string source_;
  std::map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
  std::vector<Row> rows_;
};

/// Quotes a field when it contains a delimiter, quote, or line break.
inline std::string escape(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += escape(fields[i]);
  }
  line += '\n';
  return line;
}

}  // namespace recaudit::csv
