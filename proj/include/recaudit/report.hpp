#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recaudit/cohort.hpp"
#include "recaudit/corpus.hpp"
#include "recaudit/csv.hpp"
#include "recaudit/error.hpp"
#include "recaudit/format.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/metrics.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/stats.hpp"
#include "recaudit/validate.hpp"

namespace recaudit {

enum class Stage { validate, score, rank, audit, report };
enum class OutputFormat { csv, json, markdown };

inline std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::validate: return "validate";
    case Stage::score: return "score";
    case Stage::rank: return "rank";
    case Stage::audit: return "audit";
    case Stage::report: return "report";
  }
  return "?";
}

struct RunConfig {
  InputPaths inputs;
  Window window{2009, 2011};
  Scheme default_scheme = Scheme::alphabetical;
  EligibilityConfig eligibility;
  TTestVariant ttest = TTestVariant::pooled;
  double significance = 0.01;
  std::filesystem::path out_dir = "out";
  std::set<OutputFormat> formats{OutputFormat::csv, OutputFormat::json, OutputFormat::markdown};
};

/// Pipeline failure attributed to a stage, with the process exit status it
/// maps to: 1 data/validation errors, 2 configuration errors, 3 internal.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message, int exit_code)
      : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)),
        exit_code_(exit_code) {}

  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string stage_;
  int exit_code_;
};

/// Validation found errors; carries the full report.
class ValidationFailed : public StageError {
 public:
  explicit ValidationFailed(ValidationReport report)
      : StageError("validate", summary(report), 1), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  static std::string summary(const ValidationReport& r) {
    const auto errors = r.errors();
    return std::to_string(errors.size()) + " validation error(s); first: " +
           errors.front().subject + ": " + errors.front().message;
  }

  ValidationReport report_;
};

struct ReportBundle {
  Stage reached = Stage::validate;
  Corpus corpus;
  ValidationReport validation;
  Scores scores;
  Rankings rankings;
  SdsFilterResult sds_filter;
  CohortReport cohort;
  CompetitionAuditSummary competition_audits;
  OutperformanceResult outperformance;
  std::vector<std::string> run_log;
};

namespace detail {

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(stage, e.what(), 2);
  } catch (const DataError& e) {
    throw StageError(stage, e.what(), 1);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what(), 3);
  }
}

}  // namespace detail

/// Runs ingest -> validate -> score -> rank -> audit up to `last`. Aborts with
/// a StageError on any failure, including validation errors.
inline ReportBundle run_pipeline(const RunConfig& config, Stage last = Stage::report) {
  ReportBundle b;
  b.corpus = detail::in_stage("ingest", [&] {
    return load_corpus(config.inputs, config.window, config.default_scheme);
  });
  b.validation = validate_corpus(b.corpus);
  auto& log = b.run_log;
  log.push_back("window " + std::to_string(config.window.first_year) + ":" +
                std::to_string(config.window.last_year));
  for (const auto& f : b.validation.findings)
    log.push_back("validation " + std::string(to_string(f.severity)) + " " + f.code + " " +
                  f.subject + ": " + f.message);
  if (!b.validation.accepted()) throw ValidationFailed(b.validation);
  if (last == Stage::validate) return b;

  b.reached = Stage::score;
  b.scores = detail::in_stage("score", [&] { return score_all(b.corpus); });
  for (const auto& id : b.scores.skipped)
    log.push_back("skipped_researcher " + id + " not on staff in window");
  if (last == Stage::score) return b;

  b.reached = Stage::rank;
  b.rankings = detail::in_stage("rank", [&] { return rank_all(b.scores.cards, b.corpus.roster); });
  for (const auto& [key, id] : b.rankings.singletons)
    log.push_back("singleton_stratum " + key.sds + " " + std::string(to_string(key.rank)) + " " + id +
                  " scored 50");
  if (last == Stage::rank) return b;

  b.reached = last;
  detail::in_stage("audit", [&] {
    b.sds_filter = filter_eligible_sds(b.corpus, b.scores.cards, config.eligibility);
    b.cohort = compare_winners_vs_incumbents(b.corpus, b.scores.cards, b.rankings,
                                             config.eligibility, config.ttest);
    b.competition_audits = audit_competitions(b.corpus, b.scores.cards, b.rankings, config.eligibility);
    b.outperformance = outperformance_analysis(b.corpus, b.scores.cards, config.eligibility);
    return 0;
  });
  for (const auto* part : {&b.sds_filter.log, &b.cohort.log, &b.competition_audits.log,
                           &b.outperformance.log})
    log.insert(log.end(), part->begin(), part->end());
  return b;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_validation(const ValidationReport& report) {
  std::string out = csv::join_row({"severity", "code", "subject", "message"});
  for (const auto& f : report.findings)
    out += csv::join_row({std::string(to_string(f.severity)), f.code, f.subject, f.message});
  return out;
}

inline std::string render_scorecards_csv(const ReportBundle& b) {
  std::string out = csv::join_row({"researcher_id", "sds", "rank", "N", "t", "O", "fss_if"});
  for (const auto& [id, c] : b.scores.cards) {
    const Researcher& r = *b.corpus.find_researcher(id);
    out += csv::join_row({id, r.sds, std::string(to_string(r.rank)), std::to_string(c.n),
                          fmt::real(c.t), fmt::real(c.o), fmt::real(c.fss_if)});
  }
  return out;
}

inline std::string render_scorecards_json(const ReportBundle& b) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [id, c] : b.scores.cards) {
    const Researcher& r = *b.corpus.find_researcher(id);
    arr.push_back({{"researcher_id", id}, {"sds", r.sds}, {"rank", to_string(r.rank)},
                   {"N", c.n}, {"t", fmt::rounded(c.t, 6)}, {"O", fmt::rounded(c.o, 6)},
                   {"fss_if", fmt::rounded(c.fss_if, 6)}});
  }
  return arr.dump(2) + "\n";
}

inline std::string render_percentiles_csv(const ReportBundle& b) {
  std::string out =
      csv::join_row({"researcher_id", "sds", "rank", "indicator", "percentile", "bands"});
  for (const auto& [id, pct_o] : b.rankings.o.values) {
    const Researcher& r = *b.corpus.find_researcher(id);
    const ScoreCard& card = b.scores.cards.find(id)->second;
    for (Indicator ind : {Indicator::o, Indicator::fss_if}) {
      const double p = b.rankings.table(ind).at(id);
      out += csv::join_row({id, r.sds, std::string(to_string(r.rank)), std::string(to_string(ind)),
                            fmt::real(p), classify(card, p).names()});
    }
  }
  return out;
}

inline std::string render_percentiles_json(const ReportBundle& b) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [id, pct_o] : b.rankings.o.values) {
    const Researcher& r = *b.corpus.find_researcher(id);
    const ScoreCard& card = b.scores.cards.find(id)->second;
    for (Indicator ind : {Indicator::o, Indicator::fss_if}) {
      const double p = b.rankings.table(ind).at(id);
      arr.push_back({{"researcher_id", id}, {"sds", r.sds}, {"rank", to_string(r.rank)},
                     {"indicator", to_string(ind)}, {"percentile", fmt::rounded(p, 6)},
                     {"bands", classify(card, p).names()}});
    }
  }
  return arr.dump(2) + "\n";
}

inline std::string render_histogram_csv(const OutperformanceResult& r) {
  std::string out = "k,above_one,above_both\n";
  for (const auto& [k, row] : r.histogram)
    out += std::to_string(k) + "," + std::to_string(row.above_one) + "," +
           std::to_string(row.above_both) + "\n";
  return out;
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson optional_number(const std::optional<double>& v, int decimals) {
  return v ? ojson(fmt::rounded(*v, decimals)) : ojson(nullptr);
}

inline ojson cohort_stats_json(const CohortStats& s) {
  return {{"observations", s.observations},
          {"average_percentile_rank_o", optional_number(s.mean_percentile_o, 1)},
          {"average_percentile_rank_fss_if", optional_number(s.mean_percentile_fss_if, 1)},
          {"no_publications_pct", fmt::rounded(s.no_publications, 1)},
          {"no_impact_pct", fmt::rounded(s.no_impact, 1)},
          {"bottom20_fss_if_pct", fmt::rounded(s.bottom20, 1)},
          {"below_median_fss_if_pct", fmt::rounded(s.below_median, 1)},
          {"top20_fss_if_pct", fmt::rounded(s.top20, 1)},
          {"top10_fss_if_pct", fmt::rounded(s.top10, 1)}};
}

inline ojson ttest_json(const TTestOutcome& t, double significance) {
  if (!t.result) return {{"applicable", false}, {"note", t.note}};
  return {{"applicable", true},
          {"t", fmt::rounded(t.result->t, 6)},
          {"df", fmt::rounded(t.result->df, 6)},
          {"p_two_tailed", fmt::rounded(t.result->p_two_tailed, 4)},
          {"significant", t.result->p_two_tailed < significance}};
}

inline ojson comparison_json(const CohortComparison& c, double significance) {
  return {{"winners", cohort_stats_json(c.winners)},
          {"incumbents", cohort_stats_json(c.incumbents)},
          {"ttest", {{"O", ttest_json(c.ttest_o, significance)},
                     {"FSS_IF", ttest_json(c.ttest_fss_if, significance)}}}};
}

inline ojson flag_pair_json(const FlagPair& f) {
  return {{"at_least_one", f.at_least_one}, {"both", f.both}};
}

inline ojson optional_flag(const std::optional<bool>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

inline ojson flags_json(const IndicatorFlags& f) {
  return {{"unproductive", flag_pair_json(f.unproductive)},
          {"bottom20", flag_pair_json(f.bottom20)},
          {"below_median", flag_pair_json(f.below_median)},
          {"avg_below_median", optional_flag(f.avg_below_median)},
          {"one_bottom20_one_top20", optional_flag(f.one_bottom20_one_top20)},
          {"one_below_median_one_top20", optional_flag(f.one_below_median_one_top20)}};
}

inline ojson counters_json(const FlagCounters& k) {
  return {{"unproductive", {{"at_least_one", k.unproductive_at_least_one}, {"both", k.unproductive_both}}},
          {"bottom20", {{"at_least_one", k.bottom20_at_least_one}, {"both", k.bottom20_both}}},
          {"below_median", {{"at_least_one", k.below_median_at_least_one}, {"both", k.below_median_both}}},
          {"avg_below_median", k.avg_below_median},
          {"one_bottom20_one_top20", k.one_bottom20_one_top20},
          {"one_below_median_one_top20", k.one_below_median_one_top20}};
}

}  // namespace detail

inline nlohmann::ordered_json audit_json(const ReportBundle& b, const RunConfig& config) {
  using detail::ojson;
  ojson doc = ojson::object();
  doc["cohort_comparison"] = detail::comparison_json(b.cohort.overall, config.significance);

  ojson per_uda = ojson::array();
  for (const auto& u : b.cohort.per_uda) {
    ojson entry = {{"uda", u.uda}};
    entry.update(detail::comparison_json(u.comparison, config.significance));
    per_uda.push_back(std::move(entry));
  }
  doc["per_uda"] = std::move(per_uda);

  const auto& ca = b.competition_audits;
  ojson audits = ojson::array();
  for (const auto& a : ca.audits) {
    ojson winners = ojson::array();
    for (const auto& w : a.winners)
      winners.push_back({{"researcher_id", w.researcher_id}, {"N", w.n},
                         {"O", fmt::rounded(w.o, 6)}, {"fss_if", fmt::rounded(w.fss_if, 6)},
                         {"percentile_o", fmt::rounded(w.percentile_o, 6)},
                         {"percentile_fss_if", fmt::rounded(w.percentile_fss_if, 6)}});
    audits.push_back({{"competition_id", a.competition_id}, {"sds", a.sds},
                      {"winners", std::move(winners)},
                      {"flags", {{"O", detail::flags_json(a.o)}, {"FSS_IF", detail::flags_json(a.fss_if)}}}});
  }
  doc["competition_audits"] = {
      {"competitions", ca.competitions},
      {"pair_competitions", ca.pair_competitions},
      {"counters", {{"O", detail::counters_json(ca.o)}, {"FSS_IF", detail::counters_json(ca.fss_if)}}},
      {"audits", std::move(audits)}};

  const auto& op = b.outperformance;
  ojson table = ojson::object();
  for (Column col : kColumns) {
    const auto& k = op.column(col);
    table[std::string(to_string(col))] = {{"at_least_one_above_at_least_one_winner", k.one_over_one},
                                          {"at_least_two_above_at_least_one_winner", k.two_over_one},
                                          {"at_least_one_above_both_winners", k.one_over_both},
                                          {"at_least_two_above_both_winners", k.two_over_both}};
  }
  ojson comps = ojson::array();
  for (const auto& c : op.competitions) {
    ojson one = ojson::object(), both = ojson::object();
    for (Column col : kColumns) {
      one[std::string(to_string(col))] = c.above_one[std::size_t(col)];
      both[std::string(to_string(col))] = c.above_both[std::size_t(col)];
    }
    comps.push_back({{"competition_id", c.competition_id},
                     {"eligible_non_winners", c.eligible_non_winners},
                     {"above_at_least_one_winner", std::move(one)},
                     {"above_both_winners", std::move(both)}});
  }
  ojson hist_one = ojson::array(), hist_both = ojson::array();
  for (const auto& [k, row] : op.histogram) {
    if (row.above_one) hist_one.push_back({{"k", k}, {"competitions", row.above_one}});
    if (row.above_both) hist_both.push_back({{"k", k}, {"competitions", row.above_both}});
  }
  doc["outperformance"] = {{"denominator_at_least_one", op.denominator_one},
                           {"denominator_at_least_two", op.denominator_two},
                           {"table", std::move(table)},
                           {"competitions", std::move(comps)},
                           {"histogram", {{"indicator", "FSS_IF"},
                                          {"above_one", std::move(hist_one)},
                                          {"above_both", std::move(hist_both)}}}};
  return doc;
}

inline std::string render_markdown(const ReportBundle& b, const RunConfig& config) {
  std::ostringstream md;
  const auto& overall = b.cohort.overall;
  auto opt = [](const std::optional<double>& v) { return v ? fmt::percent(*v) : std::string("n/a"); };
  auto ttest = [&](const TTestOutcome& t) {
    if (!t.result) return std::string("n/a");
    return "t = " + fmt::fixed(t.result->t, 3) + ", p = " + fmt::pvalue(t.result->p_two_tailed) +
           (t.result->p_two_tailed < config.significance ? " (significant)" : "");
  };

  md << "# Research performance audit, " << config.window.first_year << "-" << config.window.last_year
     << "\n\n";
  md << "## Winners vs incumbents\n\n";
  md << "| | Winners | Incumbents |\n|---|---|---|\n";
  md << "| Observations | " << overall.winners.observations << " | " << overall.incumbents.observations << " |\n";
  md << "| Average percentile rank for O | " << opt(overall.winners.mean_percentile_o) << " | "
     << opt(overall.incumbents.mean_percentile_o) << " |\n";
  md << "| Average percentile rank for FSS_IF | " << opt(overall.winners.mean_percentile_fss_if) << " | "
     << opt(overall.incumbents.mean_percentile_fss_if) << " |\n";
  auto share_row = [&](const char* label, double CohortStats::*field) {
    md << "| " << label << " | " << fmt::percent(overall.winners.*field) << " | "
       << fmt::percent(overall.incumbents.*field) << " |\n";
  };
  share_row("Professors with no publications (%)", &CohortStats::no_publications);
  share_row("Professors with no impact (%)", &CohortStats::no_impact);
  share_row("Bottom 20% scientists for FSS_IF (%)", &CohortStats::bottom20);
  share_row("Below median for FSS_IF (%)", &CohortStats::below_median);
  share_row("Top 20% scientists for FSS_IF (%)", &CohortStats::top20);
  share_row("Top 10% scientists for FSS_IF (%)", &CohortStats::top10);
  md << "\nt-test (" << to_string(config.ttest) << ") on percentile means, O: " << ttest(overall.ttest_o)
     << "; FSS_IF: " << ttest(overall.ttest_fss_if) << "\n\n";

  md << "## Winners (W) vs incumbents (I) by UDA\n\n";
  md << "| UDA | Obs W | Obs I | Avg pct FSS_IF W | Avg pct FSS_IF I | No pubs W (%) | No pubs I (%) "
        "| No impact W (%) | No impact I (%) | Below median W (%) | Below median I (%) "
        "| Top 20% W (%) | Top 20% I (%) | t-test FSS_IF |\n";
  md << "|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& u : b.cohort.per_uda) {
    const auto& w = u.comparison.winners;
    const auto& i = u.comparison.incumbents;
    md << "| " << u.uda << " | " << w.observations << " | " << i.observations << " | "
       << opt(w.mean_percentile_fss_if) << " | " << opt(i.mean_percentile_fss_if) << " | "
       << fmt::percent(w.no_publications) << " | " << fmt::percent(i.no_publications) << " | "
       << fmt::percent(w.no_impact) << " | " << fmt::percent(i.no_impact) << " | "
       << fmt::percent(w.below_median) << " | " << fmt::percent(i.below_median) << " | "
       << fmt::percent(w.top20) << " | " << fmt::percent(i.top20) << " | "
       << ttest(u.comparison.ttest_fss_if) << " |\n";
  }

  const auto& ca = b.competition_audits;
  const std::size_t n = ca.competitions;
  md << "\n## Competition winners\n\n";
  md << "| Competitions | O at least one | O both | FSS_IF at least one | FSS_IF both |\n|---|---|---|---|---|\n";
  auto pair_row = [&](const char* label, std::size_t FlagCounters::*one, std::size_t FlagCounters::*both) {
    md << "| " << label << " | " << fmt::count_of(ca.o.*one, n) << " | " << fmt::count_of(ca.o.*both, n)
       << " | " << fmt::count_of(ca.fss_if.*one, n) << " | " << fmt::count_of(ca.fss_if.*both, n) << " |\n";
  };
  pair_row("With unproductive winners", &FlagCounters::unproductive_at_least_one, &FlagCounters::unproductive_both);
  pair_row("With winners in bottom 20%", &FlagCounters::bottom20_at_least_one, &FlagCounters::bottom20_both);
  pair_row("With winners below the median", &FlagCounters::below_median_at_least_one,
           &FlagCounters::below_median_both);

  md << "\n| Competitions | O | FSS_IF |\n|---|---|---|\n";
  auto single_row = [&](const char* label, std::size_t FlagCounters::*field) {
    md << "| " << label << " | " << fmt::count_of(ca.o.*field, n) << " | "
       << fmt::count_of(ca.fss_if.*field, n) << " |\n";
  };
  single_row("Where average performance of the winners is below the median", &FlagCounters::avg_below_median);
  single_row("With one winner in bottom 20% and the other top 20%", &FlagCounters::one_bottom20_one_top20);
  single_row("With one winner below median the other in top 20%", &FlagCounters::one_below_median_one_top20);

  const auto& op = b.outperformance;
  md << "\n## Non-winners outperforming winners\n\n";
  md << "| Competitions | O | FSS_IF | Both O and FSS_IF |\n|---|---|---|---|\n";
  auto op_row = [&](const char* label, std::size_t OutperformanceCounters::*field, std::size_t denom) {
    md << "| " << label;
    for (Column col : kColumns) md << " | " << fmt::count_of(op.column(col).*field, denom);
    md << " |\n";
  };
  op_row("Where at least one participant had performance greater than at least one winner",
         &OutperformanceCounters::one_over_one, op.denominator_one);
  op_row("Where at least two participants had performance greater than at least one winner",
         &OutperformanceCounters::two_over_one, op.denominator_two);
  op_row("Where at least one participant had performance greater than both winners",
         &OutperformanceCounters::one_over_both, op.denominator_one);
  op_row("Where at least two participants had performance greater than both winners",
         &OutperformanceCounters::two_over_both, op.denominator_two);

  md << "\n### Competitions by number of non-winners with higher FSS_IF\n\n";
  md << "| k | Above at least one winner | Above both winners |\n|---|---|---|\n";
  for (const auto& [k, row] : op.histogram)
    md << "| " << k << " | " << row.above_one << " | " << row.above_both << " |\n";
  return md.str();
}

inline std::string render_run_log(const ReportBundle& b) {
  std::string out;
  for (const auto& line : b.run_log) out += line + "\n";
  return out;
}

/// Output file name -> contents for every stage the bundle reached.
inline std::map<std::string, std::string> render_bundle(const ReportBundle& b, const RunConfig& config) {
  std::map<std::string, std::string> files;
  const bool csv = config.formats.count(OutputFormat::csv);
  const bool json = config.formats.count(OutputFormat::json);
  files["validation.csv"] = render_validation(b.validation);
  files["run.log"] = render_run_log(b);
  if (b.reached >= Stage::score) {
    if (csv) files["scorecards.csv"] = render_scorecards_csv(b);
    if (json) files["scorecards.json"] = render_scorecards_json(b);
  }
  if (b.reached >= Stage::rank) {
    if (csv) files["percentiles.csv"] = render_percentiles_csv(b);
    if (json) files["percentiles.json"] = render_percentiles_json(b);
  }
  if (b.reached >= Stage::audit) {
    files["audit.json"] = audit_json(b, config).dump(2) + "\n";
    files["histogram.csv"] = render_histogram_csv(b.outperformance);
  }
  if (b.reached >= Stage::report && config.formats.count(OutputFormat::markdown))
    files["report.md"] = render_markdown(b, config);
  return files;
}

/// Creates the output directory and checks that it accepts files.
inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw StageError("output", "cannot create output directory '" + dir.string() + "'", 2);
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw StageError("output", "output directory '" + dir.string() + "' is not writable", 2);
  }
  std::filesystem::remove(probe, ec);
}

inline void write_bundle(const ReportBundle& b, const RunConfig& config) {
  prepare_output_dir(config.out_dir);
  for (const auto& [name, content] : render_bundle(b, config)) {
    std::ofstream f(config.out_dir / name, std::ios::binary);
    if (!f || !(f << content))
      throw StageError("output", "cannot write '" + (config.out_dir / name).string() + "'", 2);
  }
}

}  // namespace recaudit
