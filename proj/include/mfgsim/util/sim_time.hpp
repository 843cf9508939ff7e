#pragma once

#include <cstdint>
#include <string>

namespace mfgsim {

// Simulation timestamps are UTC minutes since the Unix epoch. All engine
// outputs derive from these, never from wall clock.
using Minutes = std::int64_t;

struct CivilDateTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
};

Minutes to_minutes(const CivilDateTime& c);
CivilDateTime from_minutes(Minutes m);

// 0 = Monday ... 6 = Sunday.
int weekday(Minutes m);

int minute_of_day(Minutes m);

// Days since epoch; two timestamps on the same calendar day share it.
std::int64_t day_index(Minutes m);

// "2025-01-06T06:00:00Z"
std::string to_iso(Minutes m);

// Accepts "YYYY-MM-DD" and "YYYY-MM-DDTHH:MM". Returns false on malformed input.
bool parse_iso(const std::string& s, Minutes& out);

}  // namespace mfgsim
