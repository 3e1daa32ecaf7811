#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "recaudit/calendar.hpp"
#include "recaudit/corpus.hpp"
#include "recaudit/metrics.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/stats.hpp"

namespace recaudit {

struct EligibilityConfig {
  double min_publishing_share = 0.5;
  bool require_continuous_staff = true;
  Rank target_rank = Rank::associate;  // rank held by incumbents
  double min_assistant_years = 1.0;    // non-winner eligibility
};

// ---------------------------------------------------------------------------
// Filters

struct SdsFilterResult {
  std::set<std::string, std::less<>> eligible;
  std::vector<std::string> log;  // one line per excluded SDS
};

/// SDSs where the share of scored professors with at least one publication
/// reaches min_publishing_share (inclusive).
inline SdsFilterResult filter_eligible_sds(const Corpus& corpus, const ScoreTable& scores,
                                           const EligibilityConfig& config) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // publishing, total
  for (const auto& [id, r] : corpus.roster) {
    if (r.rank == Rank::external) continue;
    auto& [publishing, total] = tally[r.sds];
    auto it = scores.find(id);
    if (it == scores.end()) continue;
    ++total;
    if (it->second.n >= 1) ++publishing;
  }
  for (const auto& c : corpus.competitions) tally.try_emplace(c.sds);

  SdsFilterResult out;
  char buf[160];
  for (const auto& [sds, counts] : tally) {
    const auto [publishing, total] = counts;
    if (total == 0) {
      out.log.push_back("excluded_sds " + sds + " no scored professors");
      continue;
    }
    const double share = double(publishing) / double(total);
    if (share >= config.min_publishing_share) {
      out.eligible.insert(sds);
    } else {
      std::snprintf(buf, sizeof buf, " publishing_share=%zu/%zu < %.6f", publishing, total,
                    config.min_publishing_share);
      out.log.push_back("excluded_sds " + sds + buf);
    }
  }
  return out;
}

/// Ids whose staff intervals jointly cover the whole observation window.
inline std::set<std::string, std::less<>> filter_continuous_staff(
    const std::set<std::string, std::less<>>& ids, const Corpus& corpus) {
  std::set<std::string, std::less<>> out;
  for (const auto& id : ids) {
    const Researcher* r = corpus.find_researcher(id);
    if (r && covers_window(r->staff, corpus.observation_window)) out.insert(id);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Winners vs incumbents

struct CohortStats {
  std::size_t observations = 0;
  std::optional<double> mean_percentile_o;
  std::optional<double> mean_percentile_fss_if;
  // Shares in percent. Percentile bands use FSS_IF.
  double no_publications = 0.0;
  double no_impact = 0.0;
  double bottom20 = 0.0;
  double below_median = 0.0;
  double top20 = 0.0;
  double top10 = 0.0;
};

struct TTestOutcome {
  std::optional<TTestResult> result;  // empty when not applicable
  std::string note;
};

struct CohortComparison {
  CohortStats winners;
  CohortStats incumbents;
  TTestOutcome ttest_o;
  TTestOutcome ttest_fss_if;
};

struct UdaComparison {
  std::string uda;
  CohortComparison comparison;
};

struct CohortReport {
  CohortComparison overall;
  std::vector<UdaComparison> per_uda;
  std::vector<std::string> winner_ids;
  std::vector<std::string> incumbent_ids;
  std::vector<std::string> log;
};

inline CohortStats cohort_stats(const std::vector<std::string>& ids, const ScoreTable& scores,
                                const Rankings& rankings) {
  CohortStats s;
  s.observations = ids.size();
  if (ids.empty()) return s;
  double sum_o = 0.0, sum_f = 0.0;
  std::array<std::size_t, 6> counts{};
  for (const auto& id : ids) {
    const ScoreCard& card = scores.find(id)->second;
    const double po = rankings.o.at(id), pf = rankings.fss_if.at(id);
    sum_o += po;
    sum_f += pf;
    const BandSet bands = classify(card, pf);
    for (Band b : {Band::no_publications, Band::no_impact, Band::bottom20, Band::below_median,
                   Band::top20, Band::top10})
      if (bands.contains(b)) ++counts[std::size_t(b)];
  }
  const double n = double(ids.size());
  s.mean_percentile_o = sum_o / n;
  s.mean_percentile_fss_if = sum_f / n;
  auto pct = [&](Band b) { return 100.0 * double(counts[std::size_t(b)]) / n; };
  s.no_publications = pct(Band::no_publications);
  s.no_impact = pct(Band::no_impact);
  s.bottom20 = pct(Band::bottom20);
  s.below_median = pct(Band::below_median);
  s.top20 = pct(Band::top20);
  s.top10 = pct(Band::top10);
  return s;
}

namespace detail {

inline TTestOutcome percentile_ttest(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b,
                                     const PercentileTable& table, TTestVariant variant) {
  if (a.size() < 2 || b.size() < 2) return {std::nullopt, "not applicable: cohort smaller than 2"};
  std::vector<double> xa, xb;
  for (const auto& id : a) xa.push_back(table.at(id));
  for (const auto& id : b) xb.push_back(table.at(id));
  try {
    return {t_test_two_sample(xa, xb, variant), {}};
  } catch (const DomainError& e) {
    return {std::nullopt, std::string("not applicable: ") + e.what()};
  }
}

inline CohortComparison compare(const std::vector<std::string>& winners,
                                const std::vector<std::string>& incumbents,
                                const ScoreTable& scores, const Rankings& rankings,
                                TTestVariant variant) {
  CohortComparison c;
  c.winners = cohort_stats(winners, scores, rankings);
  c.incumbents = cohort_stats(incumbents, scores, rankings);
  c.ttest_o = percentile_ttest(winners, incumbents, rankings.o, variant);
  c.ttest_fss_if = percentile_ttest(winners, incumbents, rankings.fss_if, variant);
  return c;
}

}  // namespace detail

/// Winners (deduplicated) against incumbents of the target rank, restricted
/// to eligible SDSs and, by default, to researchers on staff for the whole
/// window. Also broken down by UDA.
inline CohortReport compare_winners_vs_incumbents(const Corpus& corpus, const ScoreTable& scores,
                                                  const Rankings& rankings,
                                                  const EligibilityConfig& config,
                                                  TTestVariant variant = TTestVariant::pooled) {
  CohortReport out;
  const auto sds = filter_eligible_sds(corpus, scores, config);

  std::set<std::string, std::less<>> all_winners, winners;
  for (const auto& c : corpus.competitions) {
    all_winners.insert(c.winners.begin(), c.winners.end());
    if (sds.eligible.count(c.sds)) winners.insert(c.winners.begin(), c.winners.end());
  }
  std::set<std::string, std::less<>> incumbents;
  for (const auto& [id, card] : scores) {
    const Researcher* r = corpus.find_researcher(id);
    if (r && r->rank == config.target_rank && sds.eligible.count(r->sds) && !all_winners.count(id))
      incumbents.insert(id);
  }
  for (auto it = winners.begin(); it != winners.end();) {
    if (!scores.count(*it) || !rankings.o.values.count(*it)) {
      out.log.push_back("cohort_excluded_winner " + *it + " not scored");
      it = winners.erase(it);
    } else {
      ++it;
    }
  }
  if (config.require_continuous_staff) {
    auto keep_w = filter_continuous_staff(winners, corpus);
    auto keep_i = filter_continuous_staff(incumbents, corpus);
    for (const auto& id : winners)
      if (!keep_w.count(id)) out.log.push_back("cohort_excluded_winner " + id + " not on staff for whole window");
    for (const auto& id : incumbents)
      if (!keep_i.count(id)) out.log.push_back("cohort_excluded_incumbent " + id + " not on staff for whole window");
    winners = std::move(keep_w);
    incumbents = std::move(keep_i);
  }
  out.winner_ids.assign(winners.begin(), winners.end());
  out.incumbent_ids.assign(incumbents.begin(), incumbents.end());
  out.overall = detail::compare(out.winner_ids, out.incumbent_ids, scores, rankings, variant);

  std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> by_uda;
  for (const auto& id : out.winner_ids) by_uda[corpus.find_researcher(id)->uda].first.push_back(id);
  for (const auto& id : out.incumbent_ids) by_uda[corpus.find_researcher(id)->uda].second.push_back(id);
  for (const auto& [uda, cohorts] : by_uda)
    out.per_uda.push_back({uda, detail::compare(cohorts.first, cohorts.second, scores, rankings, variant)});
  return out;
}

// ---------------------------------------------------------------------------
// Per-competition winner quality

struct WinnerSummary {
  std::string researcher_id;
  int n = 0;
  double o = 0.0;
  double fss_if = 0.0;
  double percentile_o = 0.0;
  double percentile_fss_if = 0.0;
};

struct FlagPair {
  bool at_least_one = false;
  bool both = false;  // two-winner competitions only
};

struct IndicatorFlags {
  FlagPair unproductive;
  FlagPair bottom20;
  FlagPair below_median;
  // Pair patterns; absent for single-winner competitions.
  std::optional<bool> avg_below_median;
  std::optional<bool> one_bottom20_one_top20;
  std::optional<bool> one_below_median_one_top20;
};

struct CompetitionAudit {
  std::string competition_id;
  std::string sds;
  std::vector<WinnerSummary> winners;
  IndicatorFlags o;
  IndicatorFlags fss_if;

  const IndicatorFlags& flags(Indicator i) const { return i == Indicator::o ? o : fss_if; }
};

struct FlagCounters {
  std::size_t unproductive_at_least_one = 0;
  std::size_t unproductive_both = 0;
  std::size_t bottom20_at_least_one = 0;
  std::size_t bottom20_both = 0;
  std::size_t below_median_at_least_one = 0;
  std::size_t below_median_both = 0;
  std::size_t avg_below_median = 0;
  std::size_t one_bottom20_one_top20 = 0;
  std::size_t one_below_median_one_top20 = 0;

  void add(const IndicatorFlags& f) {
    unproductive_at_least_one += f.unproductive.at_least_one;
    unproductive_both += f.unproductive.both;
    bottom20_at_least_one += f.bottom20.at_least_one;
    bottom20_both += f.bottom20.both;
    below_median_at_least_one += f.below_median.at_least_one;
    below_median_both += f.below_median.both;
    avg_below_median += f.avg_below_median.value_or(false);
    one_bottom20_one_top20 += f.one_bottom20_one_top20.value_or(false);
    one_below_median_one_top20 += f.one_below_median_one_top20.value_or(false);
  }
};

struct CompetitionAuditSummary {
  std::vector<CompetitionAudit> audits;
  std::size_t competitions = 0;       // denominator
  std::size_t pair_competitions = 0;  // two-winner competitions among them
  FlagCounters o;
  FlagCounters fss_if;
  std::vector<std::string> log;
};

/// Flags for one indicator given each winner's (unproductive, percentile).
inline IndicatorFlags winner_flags(const std::vector<std::pair<bool, double>>& winners) {
  IndicatorFlags f;
  auto family = [&](auto pred) {
    std::size_t k = 0;
    for (const auto& w : winners) k += pred(w) ? 1 : 0;
    return FlagPair{k >= 1, winners.size() == 2 && k == 2};
  };
  f.unproductive = family([](const auto& w) { return w.first; });
  f.bottom20 = family([](const auto& w) { return w.second < 20.0; });
  f.below_median = family([](const auto& w) { return w.second < 50.0; });
  if (winners.size() == 2) {
    const double a = winners[0].second, b = winners[1].second;
    f.avg_below_median = (a + b) / 2.0 < 50.0;
    f.one_bottom20_one_top20 = (a < 20.0 && b >= 80.0) || (b < 20.0 && a >= 80.0);
    f.one_below_median_one_top20 = (a < 50.0 && b >= 80.0) || (b < 50.0 && a >= 80.0);
  }
  return f;
}

/// Winner-quality flags for competitions in eligible SDSs whose winners are
/// all scored (and on staff for the whole window, when required).
inline CompetitionAuditSummary audit_competitions(const Corpus& corpus, const ScoreTable& scores,
                                                  const Rankings& rankings,
                                                  const EligibilityConfig& config = {}) {
  CompetitionAuditSummary out;
  const auto sds = filter_eligible_sds(corpus, scores, config);
  for (const auto& c : corpus.competitions) {
    if (!sds.eligible.count(c.sds)) {
      out.log.push_back("audit_excluded_competition " + c.id + " sds not eligible");
      continue;
    }
    if (c.winners.empty() || c.winners.size() > 2) {
      out.log.push_back("audit_excluded_competition " + c.id + " winner count");
      continue;
    }
    std::string reason;
    for (const auto& w : c.winners) {
      const Researcher* r = corpus.find_researcher(w);
      if (!scores.count(w) || !rankings.o.values.count(w))
        reason = "winner " + w + " not scored";
      else if (config.require_continuous_staff && !covers_window(r->staff, corpus.observation_window))
        reason = "winner " + w + " not on staff for whole window";
      if (!reason.empty()) break;
    }
    if (!reason.empty()) {
      out.log.push_back("audit_excluded_competition " + c.id + " " + reason);
      continue;
    }
    CompetitionAudit a;
    a.competition_id = c.id;
    a.sds = c.sds;
    std::vector<std::pair<bool, double>> by_o, by_f;
    for (const auto& w : c.winners) {
      const ScoreCard& card = scores.find(w)->second;
      WinnerSummary s{w, card.n, card.o, card.fss_if, rankings.o.at(w), rankings.fss_if.at(w)};
      by_o.emplace_back(card.n == 0, s.percentile_o);
      by_f.emplace_back(card.fss_if == 0.0, s.percentile_fss_if);
      a.winners.push_back(std::move(s));
    }
    a.o = winner_flags(by_o);
    a.fss_if = winner_flags(by_f);
    ++out.competitions;
    if (c.winners.size() == 2) ++out.pair_competitions;
    out.o.add(a.o);
    out.fss_if.add(a.fss_if);
    out.audits.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Winners vs non-winner candidates

enum class Column { o = 0, fss_if = 1, both = 2 };
inline constexpr std::array<Column, 3> kColumns{Column::o, Column::fss_if, Column::both};

inline std::string_view to_string(Column c) {
  switch (c) {
    case Column::o: return "O";
    case Column::fss_if: return "FSS_IF";
    case Column::both: return "Both O and FSS_IF";
  }
  return "?";
}

struct CompetitionOutperformance {
  std::string competition_id;
  std::size_t eligible_non_winners = 0;
  // Per column: non-winners strictly above at least one winner / above all winners.
  std::array<std::size_t, 3> above_one{};
  std::array<std::size_t, 3> above_both{};
};

struct OutperformanceCounters {
  std::size_t one_over_one = 0;   // >=1 non-winner above >=1 winner
  std::size_t two_over_one = 0;   // >=2 non-winners above >=1 winner
  std::size_t one_over_both = 0;  // >=1 non-winner above both winners
  std::size_t two_over_both = 0;  // >=2 non-winners above both winners
};

struct HistogramRow {
  std::size_t above_one = 0;
  std::size_t above_both = 0;
};

struct OutperformanceResult {
  std::vector<CompetitionOutperformance> competitions;
  std::size_t denominator_one = 0;  // competitions with >=1 eligible non-winner
  std::size_t denominator_two = 0;  // competitions with >=2 eligible non-winners
  std::array<OutperformanceCounters, 3> counters{};
  std::map<std::size_t, HistogramRow> histogram;  // FSS_IF, k >= 1
  std::vector<std::string> log;

  const OutperformanceCounters& column(Column c) const { return counters[std::size_t(c)]; }
};

/// Eligible non-winners: candidates ranked assistant, scored, with at least
/// min_assistant_years of staff presence in the window.
inline OutperformanceResult outperformance_analysis(const Corpus& corpus, const ScoreTable& scores,
                                                    const EligibilityConfig& config = {}) {
  OutperformanceResult out;
  const auto sds = filter_eligible_sds(corpus, scores, config);
  for (const auto& c : corpus.competitions) {
    if (!sds.eligible.count(c.sds)) {
      out.log.push_back("outperformance_excluded_competition " + c.id + " sds not eligible");
      continue;
    }
    std::vector<const ScoreCard*> winners;
    for (const auto& w : c.winners) {
      auto it = scores.find(w);
      if (it != scores.end()) winners.push_back(&it->second);
    }
    if (winners.empty() || winners.size() != c.winners.size()) {
      out.log.push_back("outperformance_excluded_competition " + c.id + " winner not scored");
      continue;
    }
    std::vector<const ScoreCard*> rivals;
    for (const auto& cand : c.candidates) {
      if (c.is_winner(cand)) continue;
      const Researcher* r = corpus.find_researcher(cand);
      auto it = scores.find(cand);
      if (!r || r->rank != Rank::assistant || it == scores.end()) continue;
      if (it->second.t < config.min_assistant_years) continue;
      rivals.push_back(&it->second);
    }
    if (rivals.empty()) {
      out.log.push_back("outperformance_excluded_competition " + c.id + " no eligible non-winners");
      continue;
    }

    CompetitionOutperformance row;
    row.competition_id = c.id;
    row.eligible_non_winners = rivals.size();
    for (const ScoreCard* nw : rivals) {
      std::array<bool, 2> one{}, all{true, true};
      for (Indicator ind : {Indicator::o, Indicator::fss_if}) {
        const double v = indicator_value(*nw, ind);
        for (const ScoreCard* w : winners) {
          const bool above = v > indicator_value(*w, ind);
          one[std::size_t(ind)] = one[std::size_t(ind)] || above;
          all[std::size_t(ind)] = all[std::size_t(ind)] && above;
        }
      }
      row.above_one[0] += one[0];
      row.above_one[1] += one[1];
      row.above_one[2] += one[0] && one[1];
      row.above_both[0] += all[0];
      row.above_both[1] += all[1];
      row.above_both[2] += all[0] && all[1];
    }

    const bool two_rivals = rivals.size() >= 2;
    ++out.denominator_one;
    if (two_rivals) ++out.denominator_two;
    for (Column col : kColumns) {
      auto& k = out.counters[std::size_t(col)];
      const std::size_t i = std::size_t(col);
      k.one_over_one += row.above_one[i] >= 1;
      k.one_over_both += row.above_both[i] >= 1;
      if (two_rivals) {
        k.two_over_one += row.above_one[i] >= 2;
        k.two_over_both += row.above_both[i] >= 2;
      }
    }
    const std::size_t f = std::size_t(Column::fss_if);
    if (row.above_one[f] >= 1) ++out.histogram[row.above_one[f]].above_one;
    if (row.above_both[f] >= 1) ++out.histogram[row.above_both[f]].above_both;
    out.competitions.push_back(std::move(row));
  }
  return out;
}

}  // namespace recaudit
