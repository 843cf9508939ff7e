#include "mfgsim/sim/calendar.hpp"

#include <stdexcept>

namespace mfgsim::sim {

WorkCalendar::WorkCalendar(const model::Calendar& cal) {
  for (const model::Shift& s : cal.shifts) {
    ShiftWindow w;
    w.shift_id = s.shift_id;
    w.start_min = s.start_min;
    w.length = (s.end_min - s.start_min + 1440) % 1440;
    if (w.length == 0) w.length = 1440;
    w.break_len = cal.break_duration_min;
    w.break_start = (w.length - w.break_len) / 2;  // centered in the shift
    shifts_.push_back(w);
    working_per_day_ += w.length - w.break_len;
  }
  for (int d : cal.operating_days) {
    if (d < 0 || d > 6) throw std::logic_error("operating day out of range");
    operating_[d] = true;
  }
}

bool WorkCalendar::is_operating_weekday(int wd) const { return operating_[wd]; }

bool WorkCalendar::is_operating_day(Minutes t) const { return operating_[weekday(t)]; }

const ShiftWindow* WorkCalendar::window_at(Minutes t) const {
  int mod = minute_of_day(t);
  for (const ShiftWindow& w : shifts_) {
    int local = (mod - w.start_min + 1440) % 1440;
    if (local >= w.length) continue;
    // wrapped tail: the minutes before start_min belong to yesterday's shift
    Minutes owner = t - (mod < w.start_min ? 1440 : 0);
    if (!operating_[weekday(owner)]) continue;
    return &w;
  }
  return nullptr;
}

bool WorkCalendar::on_break(Minutes t) const {
  const ShiftWindow* w = window_at(t);
  if (!w) return false;
  int local = (minute_of_day(t) - w->start_min + 1440) % 1440;
  return local >= w->break_start && local < w->break_start + w->break_len;
}

bool WorkCalendar::is_working_time(Minutes t) const {
  const ShiftWindow* w = window_at(t);
  if (!w) return false;
  int local = (minute_of_day(t) - w->start_min + 1440) % 1440;
  return local < w->break_start || local >= w->break_start + w->break_len;
}

std::optional<std::string> WorkCalendar::shift_id_at(Minutes t) const {
  const ShiftWindow* w = window_at(t);
  if (!w) return std::nullopt;
  return w->shift_id;
}

Minutes WorkCalendar::next_working(Minutes t) const {
  // bounded: within any 8-day span there is a working minute
  for (Minutes m = t; m < t + 8 * 1440; ++m) {
    if (is_working_time(m)) return m;
  }
  throw std::logic_error("calendar has no working time");
}

}  // namespace mfgsim::sim
