#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/corpus.hpp"
#include "recaudit/error.hpp"

namespace recaudit {

using JournalMetrics = std::map<JournalYear, JournalYearMetric>;

struct ScoreCard {
  std::string researcher_id;
  int n = 0;           // publications in window
  double t = 0.0;      // years on staff in window
  double o = 0.0;      // n / t
  double fss_if = 0.0;

  friend bool operator==(const ScoreCard&, const ScoreCard&) = default;
};

using ScoreTable = std::map<std::string, ScoreCard, std::less<>>;

/// Mean impact factor of every journal-year in (category, year) with a
/// present IF. Throws DomainError when there is none.
inline double category_mean_if(const JournalMetrics& metrics, std::string_view category, int year) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [key, m] : metrics) {
    if (m.year != year || !m.impact_factor) continue;
    if (std::find(m.categories.begin(), m.categories.end(), category) == m.categories.end())
      continue;
    sum += *m.impact_factor;
    ++count;
  }
  if (count == 0)
    throw DomainError("no IF data for category/year " + std::string(category) + "/" +
                      std::to_string(year));
  return sum / double(count);
}

/// Precomputed category means for every (category, year) seen in the metrics.
class CategoryMeans {
 public:
  explicit CategoryMeans(const JournalMetrics& metrics) {
    std::map<std::pair<std::string, int>, std::pair<double, std::size_t>> acc;
    for (const auto& [key, m] : metrics) {
      if (!m.impact_factor) continue;
      for (const auto& c : m.categories) {
        auto& [sum, count] = acc[{c, m.year}];
        sum += *m.impact_factor;
        ++count;
      }
    }
    for (const auto& [key, v] : acc) means_.emplace(key, v.first / double(v.second));
  }

  double mean(const std::string& category, int year) const {
    auto it = means_.find({category, year});
    if (it == means_.end())
      throw DomainError("no IF data for category/year " + category + "/" + std::to_string(year));
    return it->second;
  }

 private:
  std::map<std::pair<std::string, int>, double> means_;
};

/// IF / mean-IF of the journal's categories, averaged over its categories.
/// Zero when the journal-year is unknown or its IF is absent or zero.
inline double normalized_impact(const Publication& pub, const JournalMetrics& metrics,
                                const CategoryMeans& means) {
  auto it = metrics.find({pub.journal_id, pub.year});
  if (it == metrics.end() || !it->second.impact_factor || *it->second.impact_factor == 0.0)
    return 0.0;
  const JournalYearMetric& m = it->second;
  double sum = 0.0;
  for (const auto& c : m.categories) {
    const double mean = means.mean(c, m.year);
    if (mean > 0.0) sum += *m.impact_factor / mean;
  }
  return sum / double(m.categories.size());
}

inline double normalized_impact(const Publication& pub, const JournalMetrics& metrics) {
  return normalized_impact(pub, metrics, CategoryMeans(metrics));
}

/// Credit share of every byline position under the given scheme; sums to 1.
///
/// position_weighted: first/last authors from the same institution get 0.40
/// each with 0.20 split among the rest. Otherwise (four or more authors)
/// first/last get 0.30, second and second-to-last 0.15, the rest split 0.10;
/// with exactly four authors that remainder goes to the two inner authors.
inline std::vector<double> contribution_weights(const std::vector<Authorship>& byline,
                                                Scheme scheme) {
  const std::size_t n = byline.size();
  if (n == 0) return {};
  if (scheme == Scheme::alphabetical || n == 1) return std::vector<double>(n, 1.0 / double(n));
  if (n == 2) return {0.5, 0.5};

  std::vector<double> w(n);
  const bool same_institution = byline.front().institution_id == byline.back().institution_id;
  if (same_institution || n == 3) {
    w.front() = w.back() = 0.40;
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.20 / double(n - 2);
    return w;
  }
  w.front() = w.back() = 0.30;
  if (n == 4) {
    w[1] = w[2] = 0.20;
    return w;
  }
  w[1] = w[n - 2] = 0.15;
  for (std::size_t i = 2; i + 2 < n; ++i) w[i] = 0.10 / double(n - 4);
  return w;
}

inline double fractional_contribution(const Publication& pub, std::string_view researcher_id,
                                      Scheme scheme) {
  auto index = pub.find_author(researcher_id);
  if (!index)
    throw DomainError("researcher '" + std::string(researcher_id) + "' not on byline of " + pub.id);
  return contribution_weights(pub.byline, scheme)[*index];
}

namespace detail {

inline ScoreCard score_publications(const Researcher& researcher, const Corpus& corpus,
                                    const std::vector<const Publication*>& pubs,
                                    const CategoryMeans& means) {
  ScoreCard card;
  card.researcher_id = researcher.id;
  card.t = staff_years(researcher.staff, corpus.observation_window);
  if (!(card.t > 0.0))
    throw DomainError("researcher '" + researcher.id + "' not on staff in window");
  double weighted = 0.0;
  for (const Publication* p : pubs) {
    if (!corpus.observation_window.contains(p->year)) continue;
    ++card.n;
    const double impact = normalized_impact(*p, corpus.journal_metrics, means);
    if (impact > 0.0) weighted += impact * fractional_contribution(*p, researcher.id, researcher.scheme);
  }
  card.o = double(card.n) / card.t;
  card.fss_if = weighted / card.t;
  return card;
}

}  // namespace detail

/// O and FSS_IF for one researcher over the corpus window.
inline ScoreCard score_researcher(const Researcher& researcher, const Corpus& corpus) {
  std::vector<const Publication*> pubs;
  for (const auto& p : corpus.publications)
    if (p.find_author(researcher.id)) pubs.push_back(&p);
  return detail::score_publications(researcher, corpus, pubs, CategoryMeans(corpus.journal_metrics));
}

struct Scores {
  ScoreTable cards;
  std::vector<std::string> skipped;  // on roster but not on staff in window
};

inline Scores score_all(const Corpus& corpus) {
  const CategoryMeans means(corpus.journal_metrics);
  std::unordered_map<std::string_view, std::vector<const Publication*>> by_author;
  for (const auto& p : corpus.publications)
    for (const auto& a : p.byline)
      if (a.researcher_id) by_author[*a.researcher_id].push_back(&p);

  static const std::vector<const Publication*> none;
  Scores out;
  for (const auto& [id, r] : corpus.roster) {
    if (r.rank == Rank::external) continue;
    if (!(staff_years(r.staff, corpus.observation_window) > 0.0)) {
      out.skipped.push_back(id);
      continue;
    }
    auto it = by_author.find(id);
    out.cards.emplace(id, detail::score_publications(r, corpus, it == by_author.end() ? none : it->second,
                                                     means));
  }
  return out;
}

}  // namespace recaudit
