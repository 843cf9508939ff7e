#include <doctest.h>

#include "mfgsim/util/sim_time.hpp"

using namespace mfgsim;

TEST_CASE("civil round trip") {
  CivilDateTime c{2025, 1, 6, 6, 0};
  Minutes m = to_minutes(c);
  CivilDateTime back = from_minutes(m);
  CHECK(back.year == 2025);
  CHECK(back.month == 1);
  CHECK(back.day == 6);
  CHECK(back.hour == 6);
  CHECK(back.minute == 0);
}

TEST_CASE("known weekdays") {
  // 2025-01-06 was a Monday, 2025-01-12 a Sunday.
  CHECK(weekday(to_minutes({2025, 1, 6, 0, 0})) == 0);
  CHECK(weekday(to_minutes({2025, 1, 12, 23, 59})) == 6);
  CHECK(weekday(to_minutes({1970, 1, 1, 0, 0})) == 3);  // Thursday
}

TEST_CASE("iso formatting") {
  Minutes m = to_minutes({2025, 1, 6, 6, 0});
  CHECK(to_iso(m) == "2025-01-06T06:00:00Z");
  Minutes parsed = 0;
  REQUIRE(parse_iso("2025-01-06T06:00", parsed));
  CHECK(parsed == m);
  REQUIRE(parse_iso("2025-01-06", parsed));
  CHECK(parsed == to_minutes({2025, 1, 6, 0, 0}));
  CHECK_FALSE(parse_iso("not-a-date", parsed));
  CHECK_FALSE(parse_iso("2025-13-01", parsed));
}

TEST_CASE("day index and minute of day") {
  Minutes m = to_minutes({2025, 1, 6, 23, 59});
  CHECK(minute_of_day(m) == 23 * 60 + 59);
  CHECK(day_index(m) == day_index(to_minutes({2025, 1, 6, 0, 0})));
  CHECK(day_index(m + 1) == day_index(m) + 1);
}

TEST_CASE("month and year boundaries") {
  Minutes m = to_minutes({2024, 2, 29, 12, 0});  // leap day
  auto c = from_minutes(m);
  CHECK(c.day == 29);
  CHECK(c.month == 2);
  Minutes next = to_minutes({2024, 3, 1, 0, 0});
  CHECK(next - to_minutes({2024, 2, 29, 0, 0}) == 1440);
  CHECK(to_minutes({2025, 1, 1, 0, 0}) - to_minutes({2024, 12, 31, 0, 0}) == 1440);
}
