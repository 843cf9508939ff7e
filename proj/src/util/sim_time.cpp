#include "mfgsim/util/sim_time.hpp"

#include <cstdio>

namespace mfgsim {

namespace {

// Howard Hinnant's algorithm; valid across the whole simulation horizon.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

Minutes to_minutes(const CivilDateTime& c) {
  return days_from_civil(c.year, c.month, c.day) * 1440 + c.hour * 60 + c.minute;
}

CivilDateTime from_minutes(Minutes m) {
  std::int64_t days = m / 1440;
  std::int64_t rem = m % 1440;
  if (rem < 0) {
    rem += 1440;
    days -= 1;
  }
  CivilDateTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(rem / 60);
  c.minute = static_cast<int>(rem % 60);
  return c;
}

int weekday(Minutes m) {
  // 1970-01-01 was a Thursday.
  std::int64_t days = day_index(m);
  return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

int minute_of_day(Minutes m) {
  std::int64_t rem = m % 1440;
  if (rem < 0) rem += 1440;
  return static_cast<int>(rem);
}

std::int64_t day_index(Minutes m) {
  std::int64_t days = m / 1440;
  if (m % 1440 < 0) days -= 1;
  return days;
}

std::string to_iso(Minutes m) {
  CivilDateTime c = from_minutes(m);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:00Z", c.year,
                c.month, c.day, c.hour, c.minute);
  return buf;
}

bool parse_iso(const std::string& s, Minutes& out) {
  CivilDateTime c;
  if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d", &c.year, &c.month, &c.day,
                  &c.hour, &c.minute) >= 3) {
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31) return false;
    if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59) return false;
    out = to_minutes(c);
    return true;
  }
  return false;
}

}  // namespace mfgsim
