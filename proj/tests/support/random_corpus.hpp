#pragma once

// Seeded synthetic corpora for property and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "recaudit/corpus.hpp"

namespace recaudit::testing {

struct CorpusShape {
  int researchers = 50;
  int publications = 200;
  int sds = 5;
  int journals = 20;
  int competitions = 8;
  int max_authors = 8;
};

inline std::string pad_id(char prefix, int i, int width = 5) {
  std::string digits = std::to_string(i);
  return std::string(1, prefix) + std::string(std::max(0, width - int(digits.size())), '0') + digits;
}

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

inline Corpus random_corpus(std::uint64_t seed, const CorpusShape& shape = {}) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  Corpus c;
  c.observation_window = {2009, 2011};

  std::vector<std::string> staff_ids;
  for (int i = 0; i < shape.researchers; ++i) {
    Researcher r;
    r.id = pad_id('R', i);
    const int s = uniform(1, shape.sds);
    r.sds = "S" + std::to_string(s);
    r.uda = "U" + std::to_string((s + 1) / 2);
    r.scheme = chance(0.5) ? Scheme::alphabetical : Scheme::position_weighted;
    const int kind = uniform(0, 19);
    if (kind == 0) {
      r.rank = Rank::external;
    } else {
      r.rank = std::array{Rank::assistant, Rank::associate, Rank::full}[uniform(0, 2)];
      if (kind <= 12) {
        r.staff.push_back({ymd(uniform(1990, 2008), unsigned(uniform(1, 12)), 1), ymd(2013, 1, 1)});
      } else if (kind <= 15) {
        const int y = uniform(2009, 2011);
        r.staff.push_back({ymd(y, unsigned(uniform(1, 12)), unsigned(uniform(1, 28))), ymd(2014, 1, 1)});
      } else if (kind <= 17) {
        const Date mid = ymd(2010, unsigned(uniform(1, 12)), unsigned(uniform(1, 28)));
        r.staff.push_back({ymd(2005, 3, 1), mid});
        r.staff.push_back({mid, ymd(2012, 9, 1)});
      } else if (kind == 18) {
        r.staff.push_back({ymd(2000, 1, 1), ymd(2008, 6, 30)});
      } else {
        r.staff.push_back({ymd(2006, 1, 1), ymd(2010, unsigned(uniform(1, 12)), 15)});
      }
      staff_ids.push_back(r.id);
    }
    c.roster.emplace(r.id, std::move(r));
  }

  const int categories = 6;
  for (int j = 0; j < shape.journals; ++j)
    for (int y = 2008; y <= 2012; ++y) {
      JournalYearMetric m;
      m.journal_id = pad_id('J', j, 4);
      m.year = y;
      if (!chance(0.1)) m.impact_factor = chance(0.05) ? 0.0 : std::uniform_real_distribution<double>(0.1, 12.0)(rng);
      const int k = uniform(1, 3);
      for (int q = 0; q < k; ++q) m.categories.push_back("C" + std::to_string(uniform(1, categories)));
      std::sort(m.categories.begin(), m.categories.end());
      m.categories.erase(std::unique(m.categories.begin(), m.categories.end()), m.categories.end());
      c.journal_metrics.emplace(JournalYear{m.journal_id, y}, std::move(m));
    }

  for (int p = 0; p < shape.publications; ++p) {
    Publication pub;
    pub.id = pad_id('P', p, 7);
    pub.year = uniform(2008, 2012);
    pub.doc_type = std::array{DocType::article, DocType::review, DocType::proceedings}[uniform(0, 2)];
    pub.journal_id = chance(0.03) ? "JUNKNOWN" : pad_id('J', uniform(0, shape.journals - 1), 4);
    const int n = uniform(1, shape.max_authors);
    std::vector<std::string> used;
    for (int a = 1; a <= n; ++a) {
      Authorship au;
      au.position = a;
      au.institution_id = "I" + std::to_string(uniform(1, 3));
      if (!staff_ids.empty() && chance(0.6)) {
        const std::string& id = staff_ids[std::size_t(uniform(0, int(staff_ids.size()) - 1))];
        if (std::find(used.begin(), used.end(), id) == used.end()) {
          au.researcher_id = id;
          used.push_back(id);
        }
      }
      pub.byline.push_back(std::move(au));
    }
    c.publications.push_back(std::move(pub));
  }

  std::vector<std::string> all_ids;
  for (const auto& [id, r] : c.roster) all_ids.push_back(id);
  for (int k = 0; k < shape.competitions && all_ids.size() >= 2; ++k) {
    Competition comp;
    comp.id = pad_id('C', k, 4);
    comp.sds = "S" + std::to_string(uniform(1, shape.sds));
    comp.university_id = "U" + std::to_string(uniform(1, 4));
    const int n = uniform(2, std::min(10, int(all_ids.size())));
    std::vector<std::string> pool = all_ids;
    std::shuffle(pool.begin(), pool.end(), rng);
    comp.candidates.assign(pool.begin(), pool.begin() + n);
    std::sort(comp.candidates.begin(), comp.candidates.end());
    std::vector<std::string> eligible_winners;
    for (const auto& id : comp.candidates)
      if (c.roster.at(id).rank != Rank::external) eligible_winners.push_back(id);
    if (eligible_winners.empty()) eligible_winners.push_back(comp.candidates.front());
    std::shuffle(eligible_winners.begin(), eligible_winners.end(), rng);
    const std::size_t w = std::min<std::size_t>(eligible_winners.size(), chance(0.85) ? 2 : 1);
    comp.winners.assign(eligible_winners.begin(), eligible_winners.begin() + long(w));
    std::sort(comp.winners.begin(), comp.winners.end());
    c.competitions.push_back(std::move(comp));
  }
  std::sort(c.publications.begin(), c.publications.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return c;
}

}  // namespace recaudit::testing
