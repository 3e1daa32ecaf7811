#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/corpus.hpp"

namespace recaudit {

enum class Severity { error, warning };

struct Finding {
  Severity severity = Severity::error;
  std::string code;     // stable machine-readable tag
  std::string subject;  // key of the offending record
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
  friend bool operator<(const Finding& a, const Finding& b) {
    return std::tie(a.severity, a.code, a.subject, a.message) <
           std::tie(b.severity, b.code, b.subject, b.message);
  }
};

struct ValidationReport {
  std::vector<Finding> findings;  // sorted

  std::vector<Finding> errors() const { return select(Severity::error); }
  std::vector<Finding> warnings() const { return select(Severity::warning); }
  bool accepted() const {
    return std::none_of(findings.begin(), findings.end(),
                        [](const Finding& f) { return f.severity == Severity::error; });
  }

 private:
  std::vector<Finding> select(Severity s) const {
    std::vector<Finding> out;
    for (const auto& f : findings)
      if (f.severity == s) out.push_back(f);
    return out;
  }
};

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

/// Cross-reference and invariant checks over a loaded corpus. The corpus is
/// accepted iff the report carries no errors.
inline ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  auto add = [&](Severity sev, std::string code, std::string subject, std::string message) {
    report.findings.push_back({sev, std::move(code), std::move(subject), std::move(message)});
  };
  const Window& window = corpus.observation_window;

  std::set<std::string, std::less<>> roster_sds;
  for (const auto& [id, r] : corpus.roster) {
    if (r.rank != Rank::external) roster_sds.insert(r.sds);
    if (r.rank == Rank::external && !r.staff.empty())
      add(Severity::error, "external_on_staff", id, "external researcher has staff intervals");
    if (r.rank != Rank::external && r.staff.empty())
      add(Severity::error, "missing_staff", id, "researcher has no staff intervals");
    for (std::size_t i = 0; i < r.staff.size(); ++i) {
      if (!(r.staff[i].start < r.staff[i].end))
        add(Severity::error, "empty_interval", id, "staff interval is empty or reversed");
      if (i > 0 && r.staff[i].start < r.staff[i - 1].end)
        add(Severity::error, "overlapping_intervals", id,
            "staff intervals overlap or are out of order");
    }
    if (r.rank != Rank::external && !r.staff.empty() && staff_years(r.staff, window) <= 0.0)
      add(Severity::warning, "no_staff_in_window", id, "no staff presence in observation window");
  }

  for (const auto& p : corpus.publications) {
    if (p.byline.empty()) {
      add(Severity::error, "empty_byline", p.id, "publication has no authors");
    } else {
      for (std::size_t i = 0; i < p.byline.size(); ++i)
        if (p.byline[i].position != int(i) + 1) {
          add(Severity::error, "byline_gap", p.id, "byline positions are not 1..n contiguous");
          break;
        }
    }
    std::set<std::string> seen;
    for (const auto& a : p.byline) {
      if (!a.researcher_id) continue;
      if (!seen.insert(*a.researcher_id).second)
        add(Severity::error, "duplicate_author", p.id,
            "researcher '" + *a.researcher_id + "' appears twice on byline");
      if (!corpus.find_researcher(*a.researcher_id))
        add(Severity::error, "unknown_researcher", p.id,
            "byline names unknown researcher '" + *a.researcher_id + "'");
    }
    if (!corpus.find_journal(p.journal_id, p.year))
      add(Severity::warning, "unknown_journal_year", p.id,
          "unknown journal-year " + p.journal_id + "@" + std::to_string(p.year) +
              "; treated as no impact");
    if (!window.contains(p.year))
      add(Severity::warning, "outside_window", p.id,
          "publication year " + std::to_string(p.year) + " outside observation window");
  }

  for (const auto& [key, m] : corpus.journal_metrics) {
    if (m.impact_factor && *m.impact_factor < 0)
      add(Severity::error, "negative_if", m.journal_id + "@" + std::to_string(m.year),
          "negative impact factor");
    if (m.impact_factor && m.categories.empty())
      add(Severity::error, "no_categories", m.journal_id + "@" + std::to_string(m.year),
          "impact factor without subject categories");
  }

  for (const auto& c : corpus.competitions) {
    if (c.winners.empty() || c.winners.size() > 2)
      add(Severity::error, "winner_count", c.id,
          "competition has " + std::to_string(c.winners.size()) + " winners, expected 1 or 2");
    for (const auto& w : c.winners)
      if (!std::binary_search(c.candidates.begin(), c.candidates.end(), w))
        add(Severity::error, "winner_not_candidate", c.id,
            "winner outside candidate set: '" + w + "'");
    for (const auto& cand : c.candidates)
      if (!corpus.find_researcher(cand))
        add(Severity::error, "unknown_candidate", c.id,
            "candidate '" + cand + "' not in roster");
    if (!roster_sds.count(c.sds))
      add(Severity::warning, "sds_without_professors", c.id,
          "sds '" + c.sds + "' has no rostered professors");
  }

  std::sort(report.findings.begin(), report.findings.end());
  return report;
}

}  // namespace recaudit
