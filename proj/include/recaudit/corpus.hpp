#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/error.hpp"

namespace recaudit {

enum class Rank { assistant, associate, full, external };
enum class Scheme { alphabetical, position_weighted };
enum class DocType { article, review, proceedings };

inline std::string_view to_string(Rank r) {
  switch (r) {
    case Rank::assistant: return "assistant";
    case Rank::associate: return "associate";
    case Rank::full: return "full";
    case Rank::external: return "external";
  }
  return "?";
}

inline std::string_view to_string(Scheme s) {
  return s == Scheme::alphabetical ? "alphabetical" : "position_weighted";
}

inline std::string_view to_string(DocType d) {
  switch (d) {
    case DocType::article: return "article";
    case DocType::review: return "review";
    case DocType::proceedings: return "proceedings";
  }
  return "?";
}

inline std::optional<Rank> parse_rank(std::string_view s) {
  if (s == "assistant") return Rank::assistant;
  if (s == "associate") return Rank::associate;
  if (s == "full") return Rank::full;
  if (s == "external") return Rank::external;
  return std::nullopt;
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
  if (s == "alphabetical") return Scheme::alphabetical;
  if (s == "position_weighted") return Scheme::position_weighted;
  return std::nullopt;
}

inline std::optional<DocType> parse_doc_type(std::string_view s) {
  if (s == "article") return DocType::article;
  if (s == "review") return DocType::review;
  if (s == "proceedings") return DocType::proceedings;
  return std::nullopt;
}

struct Researcher {
  std::string id;
  std::string sds;
  std::string uda;
  Rank rank = Rank::assistant;
  Scheme scheme = Scheme::alphabetical;
  std::vector<StaffInterval> staff;  // sorted, non-overlapping

  friend bool operator==(const Researcher&, const Researcher&) = default;
};

struct Authorship {
  int position = 0;                         // 1-based
  std::optional<std::string> researcher_id;  // absent for unmatched co-authors
  std::string institution_id;

  friend bool operator==(const Authorship&, const Authorship&) = default;
};

struct Publication {
  std::string id;
  int year = 0;
  DocType doc_type = DocType::article;
  std::string journal_id;
  std::vector<Authorship> byline;  // sorted by position

  /// Byline index of the researcher, or nullopt.
  std::optional<std::size_t> find_author(std::string_view researcher_id) const {
    for (std::size_t i = 0; i < byline.size(); ++i)
      if (byline[i].researcher_id && *byline[i].researcher_id == researcher_id) return i;
    return std::nullopt;
  }

  friend bool operator==(const Publication&, const Publication&) = default;
};

using JournalYear = std::pair<std::string, int>;

struct JournalYearMetric {
  std::string journal_id;
  int year = 0;
  std::optional<double> impact_factor;
  std::vector<std::string> categories;

  friend bool operator==(const JournalYearMetric&, const JournalYearMetric&) = default;
};

struct Competition {
  std::string id;
  std::string sds;
  std::string university_id;
  std::vector<std::string> candidates;  // sorted, unique
  std::vector<std::string> winners;     // sorted, unique

  bool is_winner(std::string_view researcher_id) const {
    return std::binary_search(winners.begin(), winners.end(), researcher_id);
  }

  friend bool operator==(const Competition&, const Competition&) = default;
};

/// Parsed input tables. Publications and competitions are kept sorted by id
/// so that every downstream traversal is independent of input row order.
struct Corpus {
  std::map<std::string, Researcher, std::less<>> roster;
  std::vector<Publication> publications;
  std::map<JournalYear, JournalYearMetric> journal_metrics;
  std::vector<Competition> competitions;
  Window observation_window;

  const Researcher* find_researcher(std::string_view id) const {
    auto it = roster.find(id);
    return it == roster.end() ? nullptr : &it->second;
  }

  const JournalYearMetric* find_journal(const std::string& journal_id, int year) const {
    auto it = journal_metrics.find({journal_id, year});
    return it == journal_metrics.end() ? nullptr : &it->second;
  }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

}  // namespace recaudit
