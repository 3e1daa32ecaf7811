#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recaudit/calendar.hpp"
#include "recaudit/corpus.hpp"
#include "recaudit/csv.hpp"
#include "recaudit/error.hpp"

namespace recaudit {

struct InputPaths {
  std::string roster;
  std::string publications;
  std::string authorships;
  std::string journals;
  std::string competitions;
};

namespace detail {

/// Rows of one input table with cells addressed by column name. Backed by
/// either a CSV file or the JSON mirror (array of records).
class Records {
 public:
  struct Row {
    std::size_t line = 0;  // CSV line, or 1-based record index for JSON
    std::vector<std::string> values;
    std::vector<std::size_t> columns;
  };

  static Records load(const std::string& path, const std::vector<std::string>& required,
                      const std::vector<std::string>& optional = {}) {
    const bool json = std::filesystem::path(path).extension() == ".json";
    return json ? from_json(path, required, optional) : from_csv(path, required, optional);
  }

  const std::string& source() const noexcept { return source_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  bool has(const std::string& column) const { return index_.count(column) != 0; }

  const std::string& get(const Row& row, const std::string& column) const {
    static const std::string empty;
    auto it = index_.find(column);
    return it == index_.end() ? empty : row.values[it->second];
  }

  [[noreturn]] void fail(const Row& row, const std::string& column,
                         const std::string& message) const {
    auto it = index_.find(column);
    std::size_t col = it == index_.end() ? 0 : row.columns[it->second];
    if (json_) throw DataError(source_, 0, 0, "record " + std::to_string(row.line) +
                                                  " field '" + column + "': " + message);
    throw DataError(source_, row.line, col, message);
  }

  [[noreturn]] void duplicate(const Row& row, const std::string& key,
                              const std::string& detail = {}) const {
    throw DuplicateKeyError(source_, json_ ? 0 : row.line, key,
                            json_ ? "record " + std::to_string(row.line) +
                                        (detail.empty() ? "" : ", " + detail)
                                  : detail);
  }

  std::string required(const Row& row, const std::string& column) const {
    const std::string& v = get(row, column);
    if (v.empty()) fail(row, column, "missing " + column + " at line " + std::to_string(row.line));
    return v;
  }

  long long integer(const Row& row, const std::string& column) const {
    const std::string v = required(row, column);
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
      fail(row, column, "invalid integer '" + v + "' in column " + column);
    return out;
  }

  Date date(const Row& row, const std::string& column) const {
    const std::string v = required(row, column);
    try {
      return parse_iso_date(v);
    } catch (const DataError& e) {
      fail(row, column, e.what());
    }
  }

  std::optional<double> real(const Row& row, const std::string& column) const {
    const std::string& v = get(row, column);
    if (v.empty()) return std::nullopt;
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
      fail(row, column, "invalid number '" + v + "' in column " + column);
    return out;
  }

 private:
  void set_columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = i;
  }

  static Records from_csv(const std::string& path, const std::vector<std::string>& required,
                          const std::vector<std::string>& optional) {
    csv::Table table(csv::Reader::from_file(path), required);
    Records r;
    r.source_ = path;
    std::vector<std::string> names = required;
    for (const auto& o : optional)
      if (table.has(o)) names.push_back(o);
    r.set_columns(names);
    for (const auto& row : table.rows()) {
      Row out;
      out.line = row.line;
      for (const auto& n : names) {
        out.values.push_back(table.get(row, n));
        out.columns.push_back(table.field(row, n).column);
      }
      r.rows_.push_back(std::move(out));
    }
    return r;
  }

  static std::string scalar(const nlohmann::json& v) {
    switch (v.type()) {
      case nlohmann::json::value_t::null: return {};
      case nlohmann::json::value_t::string: return v.get<std::string>();
      case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
      case nlohmann::json::value_t::number_integer:
      case nlohmann::json::value_t::number_unsigned: return v.dump();
      case nlohmann::json::value_t::number_float: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
      }
      case nlohmann::json::value_t::array: {
        std::string out;
        for (const auto& e : v) {
          if (!out.empty()) out += ';';
          out += scalar(e);
        }
        return out;
      }
      default: throw DataError("unsupported JSON value " + v.dump());
    }
  }

  static Records from_json(const std::string& path, const std::vector<std::string>& required,
                           const std::vector<std::string>& optional) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path, 0, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw DataError(path, 0, 0, "expected a JSON array of records");
    Records r;
    r.source_ = path;
    r.json_ = true;
    std::vector<std::string> names = required;
    names.insert(names.end(), optional.begin(), optional.end());
    r.set_columns(names);
    std::size_t index = 0;
    for (const auto& rec : doc) {
      ++index;
      if (!rec.is_object())
        throw DataError(path, 0, 0, "record " + std::to_string(index) + " is not an object");
      Row out;
      out.line = index;
      for (const auto& n : names) {
        auto it = rec.find(n);
        if (it == rec.end()) {
          out.values.emplace_back();
        } else {
          try {
            out.values.push_back(scalar(*it));
          } catch (const DataError& e) {
            throw DataError(path, 0, 0, "record " + std::to_string(index) + ": " + e.what());
          }
        }
        out.columns.push_back(0);
      }
      r.rows_.push_back(std::move(out));
    }
    return r;
  }

  std::string source_;
  bool json_ = false;
  std::map<std::string, std::size_t> index_;
  std::vector<Row> rows_;
};

inline std::vector<std::string> split_categories(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ';')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline bool parse_flag(const Records& t, const Records::Row& row, const std::string& column) {
  const std::string& v = t.get(row, column);
  if (v == "1" || v == "true" || v == "TRUE" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "FALSE" || v == "no") return false;
  t.fail(row, column, "invalid boolean '" + v + "' in column " + column);
}

}  // namespace detail

inline std::map<std::string, Researcher, std::less<>> load_roster(const std::string& path,
                                                                  Scheme default_scheme) {
  auto t = detail::Records::load(path, {"researcher_id", "sds", "uda", "rank", "staff_start", "staff_end"},
                                 {"scheme"});
  std::map<std::string, Researcher, std::less<>> roster;
  for (const auto& row : t.rows()) {
    Researcher r;
    r.id = t.required(row, "researcher_id");
    r.sds = t.required(row, "sds");
    r.uda = t.required(row, "uda");
    auto rank = parse_rank(t.get(row, "rank"));
    if (!rank) t.fail(row, "rank", "invalid rank '" + t.get(row, "rank") + "'");
    r.rank = *rank;
    r.scheme = default_scheme;
    if (!t.get(row, "scheme").empty()) {
      auto s = parse_scheme(t.get(row, "scheme"));
      if (!s) t.fail(row, "scheme", "invalid scheme '" + t.get(row, "scheme") + "'");
      r.scheme = *s;
    }
    const std::string& start = t.get(row, "staff_start");
    const std::string& end = t.get(row, "staff_end");
    if (r.rank == Rank::external) {
      if (!start.empty() || !end.empty())
        t.fail(row, "staff_start", "external researcher '" + r.id + "' cannot have staff dates");
    } else {
      StaffInterval iv;
      iv.start = t.date(row, "staff_start");
      iv.end = t.date(row, "staff_end");
      if (!(iv.start < iv.end))
        t.fail(row, "staff_end", "staff_end must be after staff_start");
      r.staff.push_back(iv);
    }

    auto [it, inserted] = roster.try_emplace(r.id, r);
    if (!inserted) {
      Researcher& prev = it->second;
      if (prev.sds != r.sds || prev.uda != r.uda || prev.rank != r.rank || prev.scheme != r.scheme)
        t.duplicate(row, r.id, "conflicting sds/uda/rank/scheme");
      if (r.staff.empty()) t.duplicate(row, r.id);
      const auto& iv = r.staff.front();
      for (const auto& other : prev.staff)
        if (iv.start < other.end && other.start < iv.end)
          t.duplicate(row, r.id, "overlapping staff interval");
      prev.staff.push_back(iv);
      std::sort(prev.staff.begin(), prev.staff.end(),
                [](const auto& a, const auto& b) { return a.start < b.start; });
    }
  }
  return roster;
}

inline std::vector<Publication> load_publications(const std::string& pubs_path,
                                                  const std::string& authorships_path) {
  auto pt = detail::Records::load(pubs_path, {"pub_id", "year", "doc_type", "journal_id"});
  std::map<std::string, Publication> pubs;
  for (const auto& row : pt.rows()) {
    Publication p;
    p.id = pt.required(row, "pub_id");
    p.year = int(pt.integer(row, "year"));
    auto dt = parse_doc_type(pt.get(row, "doc_type"));
    if (!dt) pt.fail(row, "doc_type", "invalid doc_type '" + pt.get(row, "doc_type") + "'");
    p.doc_type = *dt;
    p.journal_id = pt.required(row, "journal_id");
    if (!pubs.emplace(p.id, p).second) pt.duplicate(row, p.id);
  }

  auto at = detail::Records::load(authorships_path,
                                  {"pub_id", "position", "researcher_id", "institution_id"});
  for (const auto& row : at.rows()) {
    const std::string pub_id = at.required(row, "pub_id");
    auto it = pubs.find(pub_id);
    if (it == pubs.end()) at.fail(row, "pub_id", "unknown pub_id '" + pub_id + "'");
    Authorship a;
    const long long pos = at.integer(row, "position");
    if (pos < 1) at.fail(row, "position", "position must be >= 1");
    a.position = int(pos);
    if (!at.get(row, "researcher_id").empty()) a.researcher_id = at.get(row, "researcher_id");
    a.institution_id = at.required(row, "institution_id");
    auto& byline = it->second.byline;
    for (const auto& b : byline) {
      if (b.position == a.position)
        at.duplicate(row, pub_id + "#" + std::to_string(a.position));
      if (a.researcher_id && b.researcher_id == a.researcher_id)
        at.duplicate(row, pub_id + "/" + *a.researcher_id, "researcher listed twice on byline");
    }
    byline.push_back(std::move(a));
  }

  std::vector<Publication> out;
  out.reserve(pubs.size());
  for (auto& [id, p] : pubs) {
    std::sort(p.byline.begin(), p.byline.end(),
              [](const auto& a, const auto& b) { return a.position < b.position; });
    out.push_back(std::move(p));
  }
  return out;
}

inline std::map<JournalYear, JournalYearMetric> load_journals(const std::string& path) {
  auto t = detail::Records::load(path, {"journal_id", "year", "impact_factor", "categories"});
  std::map<JournalYear, JournalYearMetric> out;
  for (const auto& row : t.rows()) {
    JournalYearMetric m;
    m.journal_id = t.required(row, "journal_id");
    m.year = int(t.integer(row, "year"));
    m.impact_factor = t.real(row, "impact_factor");
    if (m.impact_factor && *m.impact_factor < 0)
      t.fail(row, "impact_factor", "impact_factor must be non-negative");
    m.categories = detail::split_categories(t.get(row, "categories"));
    std::sort(m.categories.begin(), m.categories.end());
    m.categories.erase(std::unique(m.categories.begin(), m.categories.end()), m.categories.end());
    if (m.impact_factor && m.categories.empty())
      t.fail(row, "categories", "categories required when impact_factor is present");
    const JournalYear key{m.journal_id, m.year};
    if (!out.emplace(key, std::move(m)).second)
      t.duplicate(row, key.first + "@" + std::to_string(key.second));
  }
  return out;
}

inline std::vector<Competition> load_competitions(const std::string& path) {
  auto t = detail::Records::load(path, {"competition_id", "sds", "university_id", "candidate_id", "is_winner"});
  std::map<std::string, Competition> comps;
  for (const auto& row : t.rows()) {
    const std::string id = t.required(row, "competition_id");
    const std::string sds = t.required(row, "sds");
    const std::string uni = t.required(row, "university_id");
    const std::string cand = t.required(row, "candidate_id");
    const bool winner = detail::parse_flag(t, row, "is_winner");
    auto [it, inserted] = comps.try_emplace(id);
    Competition& c = it->second;
    if (inserted) {
      c.id = id;
      c.sds = sds;
      c.university_id = uni;
    } else if (c.sds != sds || c.university_id != uni) {
      t.duplicate(row, id, "conflicting sds/university_id");
    }
    if (std::find(c.candidates.begin(), c.candidates.end(), cand) != c.candidates.end())
      t.duplicate(row, id + "/" + cand, "candidate listed twice");
    c.candidates.push_back(cand);
    if (winner) c.winners.push_back(cand);
  }
  std::vector<Competition> out;
  for (auto& [id, c] : comps) {
    std::sort(c.candidates.begin(), c.candidates.end());
    std::sort(c.winners.begin(), c.winners.end());
    out.push_back(std::move(c));
  }
  return out;
}

/// Parses the input tables. Cross-references are left to validate_corpus().
inline Corpus load_corpus(const InputPaths& paths, Window window,
                          Scheme default_scheme = Scheme::alphabetical) {
  Corpus c;
  c.observation_window = window;
  c.roster = load_roster(paths.roster, default_scheme);
  c.publications = load_publications(paths.publications, paths.authorships);
  c.journal_metrics = load_journals(paths.journals);
  c.competitions = load_competitions(paths.competitions);
  return c;
}

// ---------------------------------------------------------------------------
// Serialization (inverse of load_corpus)

enum class TableFormat { csv, json };

inline InputPaths corpus_paths(const std::filesystem::path& dir, TableFormat format) {
  const std::string ext = format == TableFormat::csv ? ".csv" : ".json";
  return {(dir / ("roster" + ext)).string(), (dir / ("publications" + ext)).string(),
          (dir / ("authorships" + ext)).string(), (dir / ("journals" + ext)).string(),
          (dir / ("competitions" + ext)).string()};
}

namespace detail {

struct Cell {
  enum class Kind { text, integer, real, boolean } kind = Kind::text;
  std::string text;  // CSV rendering; empty means blank / null

  static Cell str(std::string s) { return {Kind::text, std::move(s)}; }
  static Cell num(long long v) { return {Kind::integer, std::to_string(v)}; }
  static Cell flag(bool b) { return {Kind::boolean, b ? "1" : "0"}; }
  static Cell real(std::optional<double> v) {
    if (!v) return {Kind::real, {}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return {Kind::real, buf};
  }
};

inline void write_table(const std::string& path, const std::vector<std::string>& header,
                        const std::vector<std::vector<Cell>>& rows, TableFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  if (format == TableFormat::csv) {
    out << csv::join_row(header);
    for (const auto& row : rows) {
      std::vector<std::string> fields;
      for (const auto& c : row) fields.push_back(c.text);
      out << csv::join_row(fields);
    }
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      const Cell& c = row[i];
      if (c.text.empty()) {
        rec[header[i]] = nullptr;
        continue;
      }
      switch (c.kind) {
        case Cell::Kind::text: rec[header[i]] = c.text; break;
        case Cell::Kind::integer: rec[header[i]] = std::stoll(c.text); break;
        case Cell::Kind::real: rec[header[i]] = std::strtod(c.text.c_str(), nullptr); break;
        case Cell::Kind::boolean: rec[header[i]] = c.text == "1"; break;
      }
    }
    arr.push_back(std::move(rec));
  }
  out << arr.dump(1) << '\n';
}

}  // namespace detail

/// Writes the corpus as the five input tables under dir.
inline InputPaths write_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                               TableFormat format = TableFormat::csv) {
  using detail::Cell;
  std::filesystem::create_directories(dir);
  const InputPaths paths = corpus_paths(dir, format);

  std::vector<std::vector<Cell>> rows;
  for (const auto& [id, r] : corpus.roster) {
    auto base = [&](std::string start, std::string end) {
      rows.push_back({Cell::str(r.id), Cell::str(r.sds), Cell::str(r.uda),
                      Cell::str(std::string(to_string(r.rank))),
                      Cell::str(std::string(to_string(r.scheme))), Cell::str(std::move(start)),
                      Cell::str(std::move(end))});
    };
    if (r.staff.empty()) base({}, {});
    for (const auto& iv : r.staff) base(format_iso_date(iv.start), format_iso_date(iv.end));
  }
  detail::write_table(paths.roster,
                      {"researcher_id", "sds", "uda", "rank", "scheme", "staff_start", "staff_end"},
                      rows, format);

  rows.clear();
  std::vector<std::vector<Cell>> auth;
  for (const auto& p : corpus.publications) {
    rows.push_back({Cell::str(p.id), Cell::num(p.year),
                    Cell::str(std::string(to_string(p.doc_type))), Cell::str(p.journal_id)});
    for (const auto& a : p.byline)
      auth.push_back({Cell::str(p.id), Cell::num(a.position),
                      Cell::str(a.researcher_id.value_or("")), Cell::str(a.institution_id)});
  }
  detail::write_table(paths.publications, {"pub_id", "year", "doc_type", "journal_id"}, rows, format);
  detail::write_table(paths.authorships, {"pub_id", "position", "researcher_id", "institution_id"},
                      auth, format);

  rows.clear();
  for (const auto& [key, m] : corpus.journal_metrics) {
    std::string cats;
    for (const auto& c : m.categories) cats += (cats.empty() ? "" : ";") + c;
    rows.push_back({Cell::str(m.journal_id), Cell::num(m.year), Cell::real(m.impact_factor),
                    Cell::str(cats)});
  }
  detail::write_table(paths.journals, {"journal_id", "year", "impact_factor", "categories"}, rows,
                      format);

  rows.clear();
  for (const auto& c : corpus.competitions)
    for (const auto& cand : c.candidates)
      rows.push_back({Cell::str(c.id), Cell::str(c.sds), Cell::str(c.university_id),
                      Cell::str(cand), Cell::flag(c.is_winner(cand))});
  detail::write_table(paths.competitions,
                      {"competition_id", "sds", "university_id", "candidate_id", "is_winner"},
                      rows, format);
  return paths;
}

}  // namespace recaudit
