#include <gtest/gtest.h>

#include "recaudit/calendar.hpp"
#include "support/random_corpus.hpp"

namespace recaudit {
namespace {

using testing::ymd;

const Window kWindow{2009, 2011};

TEST(Calendar, ParsesIsoDates) {
  EXPECT_EQ(parse_iso_date("2012-02-29"), ymd(2012, 2, 29));
  EXPECT_EQ(format_iso_date(ymd(2009, 1, 1)), "2009-01-01");
  EXPECT_THROW(parse_iso_date("2011-02-29"), DataError);
  EXPECT_THROW(parse_iso_date("2011/02/01"), DataError);
  EXPECT_THROW(parse_iso_date("11-02-01"), DataError);
}

TEST(Calendar, ParsesWindow) {
  EXPECT_EQ(parse_window("2009:2011"), (Window{2009, 2011}));
  EXPECT_EQ(parse_window("2010"), (Window{2010, 2010}));
  EXPECT_THROW(parse_window("2011:2009"), ConfigError);
  EXPECT_THROW(parse_window("abc"), ConfigError);
}

TEST(Calendar, FullTrienniumIsThreeYears) {
  EXPECT_EQ(staff_years({{ymd(2009, 1, 1), ymd(2012, 1, 1)}}, kWindow), 3.0);
  EXPECT_EQ(staff_years({{ymd(1999, 5, 3), ymd(2020, 1, 1)}}, kWindow), 3.0);
}

TEST(Calendar, ProratesByDayWithinEachYear) {
  // 2010-07-02 .. 2012-01-01: 183 of 365 days in 2010, all of 2011.
  EXPECT_DOUBLE_EQ(staff_years({{ymd(2010, 7, 2), ymd(2012, 1, 1)}}, kWindow), 183.0 / 365.0 + 1.0);
  // Leap year denominators.
  EXPECT_DOUBLE_EQ(staff_years({{ymd(2012, 1, 1), ymd(2012, 7, 1)}}, Window{2012, 2012}), 182.0 / 366.0);
  EXPECT_EQ(staff_years({{ymd(2000, 1, 1), ymd(2009, 1, 1)}}, kWindow), 0.0);
}

TEST(Calendar, CoverageUsesUnionOfIntervals) {
  EXPECT_TRUE(covers_window({{ymd(2009, 1, 1), ymd(2012, 1, 1)}}, kWindow));
  EXPECT_FALSE(covers_window({{ymd(2010, 1, 1), ymd(2013, 1, 1)}}, kWindow));
  EXPECT_TRUE(covers_window({{ymd(2010, 5, 1), ymd(2013, 1, 1)}, {ymd(2001, 1, 1), ymd(2010, 5, 1)}},
                            kWindow));
  EXPECT_FALSE(covers_window({{ymd(2001, 1, 1), ymd(2010, 5, 1)}, {ymd(2010, 5, 2), ymd(2013, 1, 1)}},
                             kWindow));
  EXPECT_FALSE(covers_window({{ymd(2009, 1, 1), ymd(2011, 12, 31)}}, kWindow));
  EXPECT_FALSE(covers_window({}, kWindow));
}

}  // namespace
}  // namespace recaudit
