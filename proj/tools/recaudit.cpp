// recaudit: score researchers, rank them within field x rank strata, and audit
// recruitment competitions.
//
//   recaudit report --roster roster.csv --pubs publications.csv
//       --authorships authorships.csv --journals journals.csv
//       --competitions competitions.csv --window 2009:2011 --out out/

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "recaudit/recaudit.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct Options {
  recaudit::InputPaths inputs;
  std::string window = "2009:2011";
  std::string scheme_default = "alphabetical";
  std::string ttest = "pooled";
  std::string out = "out";
  std::string format = "csv,json,markdown";
  std::string target_rank = "associate";
  double min_publishing_share = 0.5;
  double significance = 0.01;
  bool allow_partial_staff = false;
};

recaudit::RunConfig make_config(const Options& o) {
  recaudit::RunConfig c;
  c.inputs = o.inputs;
  c.window = recaudit::parse_window(o.window);
  auto scheme = recaudit::parse_scheme(o.scheme_default);
  if (!scheme) throw recaudit::ConfigError("invalid --scheme-default '" + o.scheme_default + "'");
  c.default_scheme = *scheme;
  if (o.ttest == "pooled") c.ttest = recaudit::TTestVariant::pooled;
  else if (o.ttest == "welch") c.ttest = recaudit::TTestVariant::welch;
  else throw recaudit::ConfigError("invalid --ttest '" + o.ttest + "'");
  auto rank = recaudit::parse_rank(o.target_rank);
  if (!rank || *rank == recaudit::Rank::external)
    throw recaudit::ConfigError("invalid --target-rank '" + o.target_rank + "'");
  c.eligibility.target_rank = *rank;
  if (o.min_publishing_share < 0.0 || o.min_publishing_share > 1.0)
    throw recaudit::ConfigError("--min-publishing-share must be in [0,1]");
  c.eligibility.min_publishing_share = o.min_publishing_share;
  c.eligibility.require_continuous_staff = !o.allow_partial_staff;
  c.significance = o.significance;
  c.out_dir = o.out;
  c.formats.clear();
  std::istringstream ss(o.format);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") c.formats.insert(recaudit::OutputFormat::csv);
    else if (item == "json") c.formats.insert(recaudit::OutputFormat::json);
    else if (item == "markdown") c.formats.insert(recaudit::OutputFormat::markdown);
    else throw recaudit::ConfigError("invalid --format entry '" + item + "'");
  }
  return c;
}

int run(const Options& o, recaudit::Stage stage) {
  recaudit::RunConfig config;
  try {
    config = make_config(o);
  } catch (const recaudit::ConfigError& e) {
    std::cerr << "recaudit: [config] " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    if (stage != recaudit::Stage::validate) recaudit::prepare_output_dir(config.out_dir);
    recaudit::ReportBundle bundle;
    try {
      bundle = recaudit::run_pipeline(config, stage);
    } catch (const recaudit::ValidationFailed& e) {
      std::cerr << recaudit::render_validation(e.report());
      throw;
    }
    if (stage == recaudit::Stage::validate) {
      std::cout << recaudit::render_validation(bundle.validation);
      return 0;
    }
    recaudit::write_bundle(bundle, config);
    std::cerr << "recaudit: " << to_string(stage) << " complete, outputs in " << config.out_dir.string()
              << "\n";
    return 0;
  } catch (const recaudit::StageError& e) {
    std::cerr << "recaudit: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "recaudit: [internal] " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Research productivity scoring and recruitment audit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--roster", o.inputs.roster, "roster table (.csv or .json)")->required();
    cmd->add_option("--pubs", o.inputs.publications, "publications table")->required();
    cmd->add_option("--authorships", o.inputs.authorships, "authorships table")->required();
    cmd->add_option("--journals", o.inputs.journals, "journal-year impact factors")->required();
    cmd->add_option("--competitions", o.inputs.competitions, "competition candidates")->required();
    cmd->add_option("--window", o.window, "observation window START:END (inclusive years)")
        ->capture_default_str();
    cmd->add_option("--scheme-default", o.scheme_default,
                    "counting scheme for roster rows without one: alphabetical|position_weighted")
        ->capture_default_str();
    cmd->add_option("--ttest", o.ttest, "pooled|welch")->capture_default_str();
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--format", o.format, "comma-separated subset of csv,json,markdown")
        ->capture_default_str();
    cmd->add_option("--min-publishing-share", o.min_publishing_share,
                    "SDS eligibility: minimum share of publishing professors")
        ->capture_default_str();
    cmd->add_option("--target-rank", o.target_rank, "rank of incumbents compared with winners")
        ->capture_default_str();
    cmd->add_option("--significance", o.significance, "p-value annotation threshold")
        ->capture_default_str();
    cmd->add_flag("--allow-partial-staff", o.allow_partial_staff,
                  "do not require whole-window staff presence in winner audits");
  };

  struct Verb {
    const char* name;
    const char* help;
    recaudit::Stage stage;
  };
  const Verb verbs[] = {
      {"validate", "load and cross-check the inputs", recaudit::Stage::validate},
      {"score", "compute O and FSS_IF scorecards", recaudit::Stage::score},
      {"rank", "compute percentile ranks within SDS x rank strata", recaudit::Stage::rank},
      {"audit", "run the winner/incumbent/non-winner audits", recaudit::Stage::audit},
      {"report", "run the full pipeline and write every output", recaudit::Stage::report},
  };
  recaudit::Stage chosen = recaudit::Stage::report;
  for (const auto& v : verbs) {
    auto* cmd = app.add_subcommand(v.name, v.help);
    add_common(cmd);
    cmd->callback([&chosen, stage = v.stage] { chosen = stage; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(o, chosen);
}
