#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "recaudit/corpus.hpp"
#include "recaudit/error.hpp"
#include "recaudit/metrics.hpp"

namespace recaudit {

enum class Indicator { o, fss_if };

inline std::string_view to_string(Indicator i) { return i == Indicator::o ? "O" : "FSS_IF"; }

inline double indicator_value(const ScoreCard& card, Indicator i) {
  return i == Indicator::o ? card.o : card.fss_if;
}

/// Percentile of values[subject] on a 0-100 scale: 100 (L + E/2) / (n - 1)
/// where L counts values strictly below and E counts other values equal to
/// the subject. A single value scores 50.
inline double percentile_rank(std::span<const double> values, std::size_t subject) {
  if (subject >= values.size())
    throw DomainError("percentile subject index " + std::to_string(subject) + " out of range");
  const std::size_t n = values.size();
  if (n == 1) return 50.0;
  const double x = values[subject];
  std::size_t below = 0, equal = 0;
  for (double v : values) {
    if (v < x) ++below;
    else if (v == x) ++equal;
  }
  --equal;  // self
  return 100.0 * (double(below) + double(equal) / 2.0) / double(n - 1);
}

struct StratumKey {
  std::string sds;
  Rank rank = Rank::assistant;

  friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
};

struct PercentileTable {
  Indicator indicator = Indicator::o;
  std::map<std::string, double, std::less<>> values;

  double at(std::string_view id) const {
    auto it = values.find(id);
    if (it == values.end()) throw DomainError("no percentile for '" + std::string(id) + "'");
    return it->second;
  }
};

struct Rankings {
  PercentileTable o{Indicator::o, {}};
  PercentileTable fss_if{Indicator::fss_if, {}};
  std::map<std::string, StratumKey, std::less<>> stratum_of;
  std::vector<std::pair<StratumKey, std::string>> singletons;  // stratum, sole member

  const PercentileTable& table(Indicator i) const { return i == Indicator::o ? o : fss_if; }
};

namespace detail {

// Percentiles of a whole stratum at once; same result as percentile_rank()
// applied to each member.
inline std::vector<double> stratum_percentiles(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n == 1) return {50.0};
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(n);
  for (double x : values) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), x);
    auto hi = std::upper_bound(lo, sorted.end(), x);
    const double below = double(lo - sorted.begin());
    const double equal = double(hi - lo - 1);
    out.push_back(100.0 * (below + equal / 2.0) / double(n - 1));
  }
  return out;
}

}  // namespace detail

/// Percentiles within (sds, rank) strata for both indicators. Researchers
/// missing from the roster or with rank external are not ranked.
inline Rankings rank_all(const ScoreTable& scores,
                         const std::map<std::string, Researcher, std::less<>>& roster) {
  std::map<StratumKey, std::vector<const ScoreCard*>> strata;
  for (const auto& [id, card] : scores) {
    auto it = roster.find(id);
    if (it == roster.end() || it->second.rank == Rank::external) continue;
    strata[{it->second.sds, it->second.rank}].push_back(&card);
  }
  Rankings out;
  for (const auto& [key, members] : strata) {
    if (members.size() == 1) out.singletons.emplace_back(key, members.front()->researcher_id);
    for (Indicator ind : {Indicator::o, Indicator::fss_if}) {
      std::vector<double> values;
      for (const ScoreCard* c : members) values.push_back(indicator_value(*c, ind));
      const auto pct = detail::stratum_percentiles(values);
      auto& table = ind == Indicator::o ? out.o : out.fss_if;
      for (std::size_t i = 0; i < members.size(); ++i)
        table.values.emplace(members[i]->researcher_id, pct[i]);
    }
    for (const ScoreCard* c : members) out.stratum_of.emplace(c->researcher_id, key);
  }
  return out;
}

enum class Band : std::uint8_t { no_publications, no_impact, bottom20, below_median, top20, top10 };

inline std::string_view to_string(Band b) {
  switch (b) {
    case Band::no_publications: return "no_publications";
    case Band::no_impact: return "no_impact";
    case Band::bottom20: return "bottom20";
    case Band::below_median: return "below_median";
    case Band::top20: return "top20";
    case Band::top10: return "top10";
  }
  return "?";
}

class BandSet {
 public:
  void insert(Band b) { bits_ |= mask(b); }
  bool contains(Band b) const { return (bits_ & mask(b)) != 0; }
  bool empty() const { return bits_ == 0; }

  /// Semicolon-joined band names in declaration order.
  std::string names() const {
    std::string out;
    for (Band b : {Band::no_publications, Band::no_impact, Band::bottom20, Band::below_median,
                   Band::top20, Band::top10})
      if (contains(b)) {
        if (!out.empty()) out += ';';
        out += to_string(b);
      }
    return out;
  }

  friend bool operator==(const BandSet&, const BandSet&) = default;

 private:
  static std::uint8_t mask(Band b) { return std::uint8_t(1u << unsigned(b)); }
  std::uint8_t bits_ = 0;
};

/// Bands for one indicator's percentile. Lower bands use strict <, upper
/// bands use >=.
inline BandSet classify(const ScoreCard& card, double percentile) {
  BandSet s;
  if (card.n == 0) s.insert(Band::no_publications);
  if (card.fss_if == 0.0) s.insert(Band::no_impact);
  if (percentile < 20.0) s.insert(Band::bottom20);
  if (percentile < 50.0) s.insert(Band::below_median);
  if (percentile >= 80.0) s.insert(Band::top20);
  if (percentile >= 90.0) s.insert(Band::top10);
  return s;
}

struct IndicatorBands {
  BandSet o;
  BandSet fss_if;
};

inline IndicatorBands classify(const ScoreCard& card, double percentile_fss, double percentile_o) {
  return {classify(card, percentile_o), classify(card, percentile_fss)};
}

}  // namespace recaudit
