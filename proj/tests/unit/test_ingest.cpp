#include <gtest/gtest.h>

#include "recaudit/ingest.hpp"
#include "support/random_corpus.hpp"
#include "support/temp_dir.hpp"

namespace recaudit {
namespace {

using testing::TempDir;

struct Files {
  std::string roster =
      "researcher_id,sds,uda,rank,scheme,staff_start,staff_end\n"
      "r1,MAT/03,Math,associate,alphabetical,2005-01-01,2013-01-01\n"
      "r2,MAT/03,Math,assistant,,2009-06-01,2010-01-01\n"
      "r2,MAT/03,Math,assistant,,2010-01-01,2012-06-01\n"
      "x1,MAT/03,Math,external,,,\n";
  std::string pubs =
      "pub_id,year,doc_type,journal_id\n"
      "p2,2010,review,J1\n"
      "p1,2009,article,J1\n";
  std::string authorships =
      "pub_id,position,researcher_id,institution_id\n"
      "p1,2,r2,U1\n"
      "p1,1,r1,U1\n"
      "p1,3,,U9\n"
      "p2,1,r2,U1\n";
  std::string journals =
      "journal_id,year,impact_factor,categories\n"
      "J1,2009,2.5,\"C1;C2\"\n"
      "J1,2010,,\n";
  std::string competitions =
      "competition_id,sds,university_id,candidate_id,is_winner\n"
      "K1,MAT/03,UNI1,r2,1\n"
      "K1,MAT/03,UNI1,x1,0\n";

  InputPaths write(const TempDir& dir) const {
    return {dir.write("roster.csv", roster), dir.write("publications.csv", pubs),
            dir.write("authorships.csv", authorships), dir.write("journals.csv", journals),
            dir.write("competitions.csv", competitions)};
  }
};

TEST(Ingest, LoadsWellFormedFiles) {
  TempDir dir;
  Corpus c = load_corpus(Files{}.write(dir), {2009, 2011});
  EXPECT_EQ(c.observation_window, (Window{2009, 2011}));
  ASSERT_EQ(c.roster.size(), 3u);
  EXPECT_EQ(c.roster.at("r2").staff.size(), 2u);
  EXPECT_EQ(c.roster.at("r2").scheme, Scheme::alphabetical);
  EXPECT_EQ(c.roster.at("x1").rank, Rank::external);
  ASSERT_EQ(c.publications.size(), 2u);
  EXPECT_EQ(c.publications[0].id, "p1");
  ASSERT_EQ(c.publications[0].byline.size(), 3u);
  EXPECT_EQ(c.publications[0].byline[0].researcher_id, "r1");
  EXPECT_FALSE(c.publications[0].byline[2].researcher_id.has_value());
  EXPECT_EQ(c.publications[1].doc_type, DocType::review);
  ASSERT_EQ(c.journal_metrics.size(), 2u);
  EXPECT_EQ(c.find_journal("J1", 2009)->categories, (std::vector<std::string>{"C1", "C2"}));
  EXPECT_FALSE(c.find_journal("J1", 2010)->impact_factor.has_value());
  ASSERT_EQ(c.competitions.size(), 1u);
  EXPECT_EQ(c.competitions[0].candidates, (std::vector<std::string>{"r2", "x1"}));
  EXPECT_EQ(c.competitions[0].winners, (std::vector<std::string>{"r2"}));
}

TEST(Ingest, DefaultSchemeAppliesToBlankRows) {
  TempDir dir;
  Corpus c = load_corpus(Files{}.write(dir), {2009, 2011}, Scheme::position_weighted);
  EXPECT_EQ(c.roster.at("r1").scheme, Scheme::alphabetical);
  EXPECT_EQ(c.roster.at("r2").scheme, Scheme::position_weighted);
}

TEST(Ingest, MissingSdsNamesLine) {
  TempDir dir;
  Files f;
  f.roster += "r3,,Math,full,,2001-01-01,2013-01-01\n";
  try {
    load_corpus(f.write(dir), {2009, 2011});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("missing sds at line 6"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("roster.csv:6:"), std::string::npos) << e.what();
    EXPECT_EQ(e.line(), 6u);
    EXPECT_EQ(e.column(), 4u);
  }
}

TEST(Ingest, DuplicateResearcherIsRejected) {
  TempDir dir;
  Files f;
  f.roster += "r1,MAT/05,Math,associate,alphabetical,2013-01-01,2014-01-01\n";
  try {
    load_corpus(f.write(dir), {2009, 2011});
    FAIL();
  } catch (const DuplicateKeyError& e) {
    EXPECT_EQ(e.key(), "r1");
  }
  Files g;
  g.roster += "r1,MAT/03,Math,associate,alphabetical,2010-01-01,2011-01-01\n";
  EXPECT_THROW(load_corpus(g.write(dir), {2009, 2011}), DuplicateKeyError);
}

TEST(Ingest, RejectsOtherDuplicateKeys) {
  TempDir dir;
  {
    Files f;
    f.pubs += "p1,2011,article,J1\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
  {
    Files f;
    f.authorships += "p2,1,r1,U1\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
  {
    Files f;
    f.authorships += "p2,2,r2,U1\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
  {
    Files f;
    f.journals += "J1,2009,1.0,C1\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
  {
    Files f;
    f.competitions += "K1,MAT/03,UNI1,r2,0\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
  {
    Files f;
    f.competitions += "K1,MAT/04,UNI1,r1,0\n";
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DuplicateKeyError);
  }
}

TEST(Ingest, RejectsMalformedValues) {
  TempDir dir;
  auto expect_error = [&](auto mutate) {
    Files f;
    mutate(f);
    EXPECT_THROW(load_corpus(f.write(dir), {2009, 2011}), DataError);
  };
  expect_error([](Files& f) { f.roster += "r9,A,B,professor,,2001-01-01,2013-01-01\n"; });
  expect_error([](Files& f) { f.roster += "r9,A,B,full,,2001-13-01,2013-01-01\n"; });
  expect_error([](Files& f) { f.roster += "r9,A,B,full,,2013-01-01,2001-01-01\n"; });
  expect_error([](Files& f) { f.roster += "r9,A,B,full,,,\n"; });
  expect_error([](Files& f) { f.roster += "x9,A,B,external,,2001-01-01,2013-01-01\n"; });
  expect_error([](Files& f) { f.roster += "r9,A,B,full,weird,2001-01-01,2013-01-01\n"; });
  expect_error([](Files& f) { f.pubs += "p3,2010,letter,J1\n"; });
  expect_error([](Files& f) { f.pubs += "p3,20x0,article,J1\n"; });
  expect_error([](Files& f) { f.authorships += "p404,1,r1,U1\n"; });
  expect_error([](Files& f) { f.authorships += "p2,0,r1,U1\n"; });
  expect_error([](Files& f) { f.journals += "J2,2009,-1,C1\n"; });
  expect_error([](Files& f) { f.journals += "J2,2009,1.5,\n"; });
  expect_error([](Files& f) { f.journals += "J2,2009,abc,C1\n"; });
  expect_error([](Files& f) { f.competitions += "K2,MAT/03,UNI1,r1,maybe\n"; });
}

TEST(Ingest, JsonMirrorMatchesCsv) {
  TempDir dir;
  const InputPaths csv_paths = Files{}.write(dir);
  const InputPaths json_paths{
      dir.write("roster.json",
                R"([{"researcher_id":"r1","sds":"MAT/03","uda":"Math","rank":"associate","scheme":"alphabetical","staff_start":"2005-01-01","staff_end":"2013-01-01"},
                    {"researcher_id":"r2","sds":"MAT/03","uda":"Math","rank":"assistant","staff_start":"2009-06-01","staff_end":"2010-01-01"},
                    {"researcher_id":"r2","sds":"MAT/03","uda":"Math","rank":"assistant","scheme":null,"staff_start":"2010-01-01","staff_end":"2012-06-01"},
                    {"researcher_id":"x1","sds":"MAT/03","uda":"Math","rank":"external","staff_start":null,"staff_end":null}])"),
      dir.write("publications.json",
                R"([{"pub_id":"p1","year":2009,"doc_type":"article","journal_id":"J1"},
                    {"pub_id":"p2","year":"2010","doc_type":"review","journal_id":"J1"}])"),
      dir.write("authorships.json",
                R"([{"pub_id":"p1","position":1,"researcher_id":"r1","institution_id":"U1"},
                    {"pub_id":"p1","position":2,"researcher_id":"r2","institution_id":"U1"},
                    {"pub_id":"p1","position":3,"researcher_id":null,"institution_id":"U9"},
                    {"pub_id":"p2","position":1,"researcher_id":"r2","institution_id":"U1"}])"),
      dir.write("journals.json",
                R"([{"journal_id":"J1","year":2009,"impact_factor":2.5,"categories":["C2","C1"]},
                    {"journal_id":"J1","year":2010,"impact_factor":null,"categories":""}])"),
      dir.write("competitions.json",
                R"([{"competition_id":"K1","sds":"MAT/03","university_id":"UNI1","candidate_id":"r2","is_winner":true},
                    {"competition_id":"K1","sds":"MAT/03","university_id":"UNI1","candidate_id":"x1","is_winner":false}])")};
  EXPECT_EQ(load_corpus(csv_paths, {2009, 2011}), load_corpus(json_paths, {2009, 2011}));
}

TEST(Ingest, JsonErrorsNameTheRecord) {
  TempDir dir;
  Files f;
  InputPaths p = f.write(dir);
  p.roster = dir.write("roster.json", R"([{"researcher_id":"r1","sds":"","uda":"M","rank":"full","staff_start":"2001-01-01","staff_end":"2013-01-01"}])");
  try {
    load_corpus(p, {2009, 2011});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("missing sds"), std::string::npos) << e.what();
  }
  p.roster = dir.write("roster.json", "{not json");
  EXPECT_THROW(load_corpus(p, {2009, 2011}), DataError);
}

TEST(Ingest, MissingFileIsConfigError) {
  TempDir dir;
  InputPaths p = Files{}.write(dir);
  p.journals = (dir.path() / "absent.csv").string();
  EXPECT_THROW(load_corpus(p, {2009, 2011}), ConfigError);
}

TEST(Ingest, SerializeThenLoadIsIdentity) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Corpus original = testing::random_corpus(seed, {.researchers = 30, .publications = 80});
    for (TableFormat format : {TableFormat::csv, TableFormat::json}) {
      TempDir dir;
      const InputPaths paths = write_corpus(original, dir.path(), format);
      const Corpus loaded = load_corpus(paths, original.observation_window);
      ASSERT_EQ(loaded, original) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace recaudit
