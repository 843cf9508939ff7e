#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfgsim/model/domain_template.hpp"
#include "mfgsim/util/sim_time.hpp"

namespace mfgsim::sim {

// One shift compiled into minute arithmetic. A shift may wrap midnight
// (start + length > 1440), in which case the early-morning tail belongs to
// the previous calendar day for operating-day purposes.
struct ShiftWindow {
  std::string shift_id;
  int start_min = 0;  // minute of day
  int length = 0;     // minutes, <= 1440
  int break_start = 0;  // offset from shift start
  int break_len = 0;
};

// Answers "is the plant working at minute t" for scheduling, disruption
// clocks, and equipment timers. Breaks pause work but stay inside the shift.
class WorkCalendar {
 public:
  explicit WorkCalendar(const model::Calendar& cal);

  bool is_operating_weekday(int weekday) const;  // 0 = Monday
  bool is_operating_day(Minutes t) const;
  bool is_working_time(Minutes t) const;
  bool on_break(Minutes t) const;

  // Shift containing t (breaks included); nullopt outside all shifts or on a
  // non-operating day.
  std::optional<std::string> shift_id_at(Minutes t) const;

  // Smallest working minute >= t.
  Minutes next_working(Minutes t) const;

  int working_minutes_per_day() const { return working_per_day_; }
  const std::vector<ShiftWindow>& shifts() const { return shifts_; }

 private:
  const ShiftWindow* window_at(Minutes t) const;

  std::vector<ShiftWindow> shifts_;
  bool operating_[7] = {};
  int working_per_day_ = 0;
};

}  // namespace mfgsim::sim
