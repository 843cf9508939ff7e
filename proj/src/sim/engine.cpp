#include "mfgsim/sim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mfgsim/sim/seeds.hpp"

namespace mfgsim::sim {

namespace {

using store::PendingRow;
using store::Row;
using store::Value;

Value tx(const std::string& s) { return s; }
Value iv(std::int64_t v) { return v; }
Value rv(double v) { return v; }
Value bv(bool v) { return v; }

std::string seq_id(const char* prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, n);
  return buf;
}

int midpoint(const model::MinuteRange& r) { return (r.lo + r.hi) / 2; }

}  // namespace

Minutes canonical_start() { return to_minutes({2025, 1, 6, 0, 0}); }

Engine::Engine(std::shared_ptr<const model::DomainTemplate> t, const RunConfig& cfg)
    : t_(std::move(t)),
      cfg_(cfg),
      cal_(t_->calendar),
      rng_orders_(Rng::stream(cfg.seed, "orders")),
      rng_durations_(Rng::stream(cfg.seed, "durations")),
      rng_quality_(Rng::stream(cfg.seed, "quality")),
      rng_breakdown_(Rng::stream(cfg.seed, "breakdown")),
      rng_disrupt_(Rng::stream(cfg.seed, "disrupt")),
      rng_lifecycle_(Rng::stream(cfg.seed, "lifecycle")),
      rng_expedite_(Rng::stream(cfg.seed, "expedite")) {
  start_ = cfg.start;
  end_ = start_ + static_cast<Minutes>(cfg.days) * 1440;
  now_ = start_;

  sum_.template_id = t_->template_id;
  sum_.seed = cfg.seed;
  sum_.days = cfg.days;
  sum_.start = start_;
  sum_.end = end_;

  store_.insert_batch(seed_rows(*t_, start_, cfg.days), start_);

  // units and operators mirror the seeded rows in the same order
  double breakdown_mtbf = 60.0 / t_->rates.equipment_downtime_prob;
  for (const auto& [unit, station] : unit_stations(*t_)) {
    Unit u;
    u.nid = unit;
    u.station_id = station;
    u.breakdown_countdown = working_exponential(rng_breakdown_, breakdown_mtbf);
    u.status_since = start_;
    units_.push_back(std::move(u));
  }
  {
    int opr = 0;
    for (const model::Shift& s : t_->calendar.shifts) {
      for (const auto& [unit, station] : unit_stations(*t_)) {
        (void)unit;
        operators_.push_back({seq_id("OPR-", ++opr, 3), s.shift_id, station, false});
      }
    }
  }

  // work centers in station order; each gets a weekly PM block
  {
    std::map<std::string, std::size_t> wc_index;
    for (const model::Station& st : t_->stations) {
      const std::string& wc = t_->station_to_wc.at(st.station_id);
      if (!wc_index.count(wc)) {
        wc_index.emplace(wc, wc_units_.size());
        wc_units_.push_back({wc, {}});
      }
    }
    for (std::size_t i = 0; i < units_.size(); ++i) {
      const std::string& wc = t_->station_to_wc.at(units_[i].station_id);
      wc_units_[wc_index.at(wc)].second.push_back(i);
    }
    pm_block_minutes_ =
        static_cast<int>(std::lround(t_->weekly_pm_hours * 60.0 / wc_units_.size()));
    for (std::size_t k = 0; k < wc_units_.size(); ++k) {
      pm_stagger_.push_back(360 + static_cast<int>(k) * 60);
      pm_week_fired_.push_back(-1);
    }
  }

  for (const model::Station& st : t_->stations) {
    auto it = t_->operation_material_consumption.find(st.station_id);
    if (it != t_->operation_material_consumption.end() && !it->second.empty()) {
      supply_stations_.push_back(st.station_id);
    }
    if (st.is_quality_gate) gate_stations_.push_back(st.station_id);
    station_queues_[st.station_id];  // materialize in station order
  }

  for (const model::Product& p : t_->products) {
    product_quota_.emplace_back(p.annual_volume, t_->calendar.working_days_per_year);
    deferred_quota_.push_back(0);
  }
  wip_ceiling_ = static_cast<std::int64_t>(t_->targets.avg_wip.hi);

  // lot cursors and BOM quantities come from the seeded rows themselves
  for (const Row& lot : store_.scan("material_lot")) {
    const std::string mat = lot.text("material_nid");
    material_lots_[mat].push_back(lot.text("nid"));
    if (!lot_cursor_.count(mat)) lot_cursor_[mat] = {0, lot.real("quantity")};
  }
  for (const Row& bl : store_.scan("bom_line")) {
    bom_qty_[bl.text("part_number")][bl.text("station_id")][bl.text("material_nid")] =
        bl.real("qty_per");
  }

  double stress_supply = cfg_.stressful ? 0.2 : 1.0;
  double stress_excursion = cfg_.stressful ? 0.1 : 1.0;
  double stress_shortage = cfg_.stressful ? 0.5 : 1.0;
  supply_countdown_ =
      working_exponential(rng_disrupt_, t_->disruptions.supply_delay.mtbf_min * stress_supply);
  excursion_countdown_ = working_exponential(
      rng_disrupt_, t_->disruptions.quality_excursion.mtbf_min * stress_excursion);
  shortage_countdown_ = working_exponential(
      rng_disrupt_, t_->disruptions.operator_shortage.mtbf_min * stress_shortage);
  change_countdown_ = working_exponential(
      rng_disrupt_, cal_.working_minutes_per_day() / t_->rates.change_package_rate);
  expedite_countdown_ = working_exponential(
      rng_expedite_, cal_.working_minutes_per_day() / t_->rates.order_expedite_rate);
}

double Engine::working_exponential(Rng& rng, double mean) const {
  return std::max(5.0, std::round(rng.exponential(mean)));
}

const Engine::Unit* Engine::find_unit(const std::string& nid) const {
  for (const Unit& u : units_) {
    if (u.nid == nid) return &u;
  }
  return nullptr;
}

int Engine::on_shift_operator_count(const std::string& shift_id) const {
  int n = 0;
  for (const Operator& o : operators_) n += o.shift_id == shift_id;
  return n;
}

bool Engine::operator_withheld(const std::string& nid) const {
  for (const ActiveDisruption& d : disruptions_) {
    if (d.kind != DisruptionKind::OperatorShortage) continue;
    if (std::find(d.operators.begin(), d.operators.end(), nid) != d.operators.end()) return true;
  }
  return false;
}

bool Engine::supply_blocked(const std::string& station_id) const {
  for (const ActiveDisruption& d : disruptions_) {
    if (d.kind == DisruptionKind::SupplyDelay && d.station_id == station_id) return true;
  }
  return false;
}

bool Engine::excursion_at(const std::string& station_id) const {
  for (const ActiveDisruption& d : disruptions_) {
    if (d.kind == DisruptionKind::QualityExcursion && d.station_id == station_id) return true;
  }
  return false;
}

bool Engine::step() {
  if (now_ >= end_) return false;
  if (cal_.is_working_time(now_)) {
    tick_working(now_);
    ++now_;
  } else {
    now_ = std::min(cal_.next_working(now_), end_);
  }
  return now_ < end_;
}

void Engine::run() {
  while (step()) {
  }
}

void Engine::tick_working(Minutes t) {
  phase_disruptions(t);
  if (minute_of_day(t) == 360 && cal_.is_operating_day(t)) phase_daily(t);
  phase_schedule(t);
  phase_progress(t);
  if (minute_of_day(t) % 15 == 0) phase_equipment(t);
  if (minute_of_day(t) % 30 == 0) phase_lifecycle(t);
}

void Engine::set_unit_status(Unit& u, UnitStatus to, Minutes t, const std::string& event_type,
                             std::optional<std::int64_t> duration) {
  auto name = [](UnitStatus s) {
    switch (s) {
      case UnitStatus::Running: return "RUNNING";
      case UnitStatus::Down: return "DOWN";
      case UnitStatus::Pm: return "PM";
    }
    return "?";
  };
  check_transition("equipment", name(u.status), name(to));
  u.status = to;
  u.status_since = t;
  store_.update_row("equipment", u.nid, {{"status", tx(name(to))}}, t);
  Row ev{{{"nid", seq_id("EE-", ++event_no_, 6)},
          {"equipment_nid", tx(u.nid)},
          {"event_type", tx(event_type)},
          {"status", tx(name(to))}}};
  if (duration) ev.values["duration_min"] = iv(*duration);
  store_.insert_batch({{"equipment_event", std::move(ev)}}, t);
}

void Engine::start_pm(Unit& u, Minutes t) {
  u.pm_due = false;
  u.status_until = t + u.pm_minutes;
  set_unit_status(u, UnitStatus::Pm, t, "PM_START", std::nullopt);
}

void Engine::finish_downtime(Unit& u, Minutes t) {
  const char* event = u.status == UnitStatus::Down ? "BREAKDOWN_END" : "PM_END";
  std::int64_t actual = t - u.status_since;
  set_unit_status(u, UnitStatus::Running, t, event, actual);
}

void Engine::phase_disruptions(Minutes t) {
  // recoveries first, so a unit can go straight into a pending PM block
  for (Unit& u : units_) {
    if (u.status != UnitStatus::Running && t >= u.status_until) finish_downtime(u, t);
  }

  // weekly PM: fire each work center's block at its Monday stagger slot
  if (weekday(t) == 0 && pm_block_minutes_ > 0) {
    std::int64_t week = (day_index(t) - day_index(start_)) / 7;
    for (std::size_t k = 0; k < wc_units_.size(); ++k) {
      if (pm_week_fired_[k] >= week || minute_of_day(t) < pm_stagger_[k]) continue;
      pm_week_fired_[k] = week;
      const auto& unit_idx = wc_units_[k].second;
      Unit& u = units_[unit_idx[static_cast<std::size_t>(week) % unit_idx.size()]];
      u.pm_due = true;
      u.pm_minutes = pm_block_minutes_;
    }
  }
  for (Unit& u : units_) {
    if (u.pm_due && u.status == UnitStatus::Running && !u.busy) start_pm(u, t);
  }

  // per-unit breakdown clocks tick in working minutes while the unit is up
  for (Unit& u : units_) {
    if (u.status != UnitStatus::Running) continue;
    if (--u.breakdown_countdown > 0.0) continue;
    double mtbf = 60.0 / t_->rates.equipment_downtime_prob;
    u.breakdown_countdown = working_exponential(rng_breakdown_, mtbf);
    std::int64_t dur = rng_breakdown_.uniform_int(t_->rates.equipment_downtime_duration.lo,
                                                  t_->rates.equipment_downtime_duration.hi);
    u.status_until = t + dur;
    ++sum_.breakdown_count;
    set_unit_status(u, UnitStatus::Down, t, "BREAKDOWN", std::nullopt);
  }

  // plant-level disruption clocks
  double stress_dur = cfg_.stressful ? 2.0 : 1.0;
  if (--supply_countdown_ <= 0.0 && !supply_stations_.empty()) {
    supply_countdown_ = working_exponential(
        rng_disrupt_, t_->disruptions.supply_delay.mtbf_min * (cfg_.stressful ? 0.2 : 1.0));
    ActiveDisruption d;
    d.kind = DisruptionKind::SupplyDelay;
    d.station_id = supply_stations_[static_cast<std::size_t>(
        rng_disrupt_.uniform_int(0, static_cast<std::int64_t>(supply_stations_.size()) - 1))];
    d.remaining_working = static_cast<int>(
        stress_dur * rng_disrupt_.uniform_int(t_->disruptions.supply_delay.duration_min.lo,
                                              t_->disruptions.supply_delay.duration_min.hi));
    disruptions_.push_back(std::move(d));
  }
  // quality excursions belong to the stressful profile; a stable plant keeps
  // its inspection results at the configured station yields
  if (cfg_.stressful && --excursion_countdown_ <= 0.0 && !gate_stations_.empty()) {
    excursion_countdown_ =
        working_exponential(rng_disrupt_, t_->disruptions.quality_excursion.mtbf_min * 0.1);
    ActiveDisruption d;
    d.kind = DisruptionKind::QualityExcursion;
    d.station_id = gate_stations_[static_cast<std::size_t>(
        rng_disrupt_.uniform_int(0, static_cast<std::int64_t>(gate_stations_.size()) - 1))];
    d.remaining_working = static_cast<int>(
        stress_dur * rng_disrupt_.uniform_int(t_->disruptions.quality_excursion.duration_min.lo,
                                              t_->disruptions.quality_excursion.duration_min.hi));
    disruptions_.push_back(std::move(d));
  }
  if (--shortage_countdown_ <= 0.0) {
    shortage_countdown_ = working_exponential(
        rng_disrupt_, t_->disruptions.operator_shortage.mtbf_min * (cfg_.stressful ? 0.5 : 1.0));
    auto shift = cal_.shift_id_at(t);
    if (shift) {
      int on_shift = on_shift_operator_count(*shift);
      int k = std::max(1, static_cast<int>(std::lround(on_shift * 0.1)));
      ActiveDisruption d;
      d.kind = DisruptionKind::OperatorShortage;
      // the k highest-numbered operators of the shift call out
      for (auto it = operators_.rbegin(); it != operators_.rend() && k > 0; ++it) {
        if (it->shift_id == *shift) {
          d.operators.push_back(it->nid);
          --k;
        }
      }
      d.remaining_working = rng_disrupt_.uniform_int(
          t_->disruptions.operator_shortage.duration_min.lo,
          t_->disruptions.operator_shortage.duration_min.hi);
      disruptions_.push_back(std::move(d));
    }
  }
  if (--change_countdown_ <= 0.0) {
    change_countdown_ = working_exponential(
        rng_disrupt_, cal_.working_minutes_per_day() / t_->rates.change_package_rate);
    create_change_package(t, "", "", "", "");
  }
  if (--expedite_countdown_ <= 0.0) {
    expedite_countdown_ = working_exponential(
        rng_expedite_, cal_.working_minutes_per_day() / t_->rates.order_expedite_rate);
    for (auto& [nid, rec] : orders_) {
      if (rec.expedited || rec.status == "Complete") continue;
      rec.expedited = true;
      store_.update_row("work_order", nid, {{"expedited", bv(true)}}, t);
      break;
    }
  }

  // active disruptions drain on working minutes
  for (auto it = disruptions_.begin(); it != disruptions_.end();) {
    if (--it->remaining_working <= 0) {
      it = disruptions_.erase(it);
    } else {
      ++it;
    }
  }

  // availability accounting
  scheduled_unit_minutes_ += static_cast<std::int64_t>(units_.size());
  for (const Unit& u : units_) {
    if (u.status != UnitStatus::Running) ++sum_.downtime_working_minutes;
  }
}

void Engine::phase_daily(Minutes t) {
  ++operating_day_count_;

  // start-of-day WIP snapshot
  {
    std::int64_t wip = 0;
    for (const auto& [nid, rec] : orders_) wip += rec.status == "Active";
    std::int64_t on_hold = 0;
    for (const auto& [station, queue] : station_queues_) {
      if (supply_blocked(station)) on_hold += static_cast<std::int64_t>(queue.size());
    }
    store_.insert_batch({{"daily_wip_snapshot",
                          {{{"nid", seq_id("WIP-", ++wip_no_, 4)},
                            {"snapshot_date", tx(to_iso(t).substr(0, 10))},
                            {"wip_count", iv(wip)},
                            {"on_hold_count", iv(on_hold)}}}}},
                        t);
    wip_sum_ += wip;
    ++wip_days_;
  }

  // order creation, product quotas spread by the fractional accumulator;
  // release holds while unfinished WIP sits at the ceiling (deferred quota
  // carries forward, so a stable run still emits its exact volume)
  std::int64_t unfinished = 0;
  for (const auto& [nid, rec] : orders_) unfinished += rec.status != "Complete";
  std::vector<PendingRow> batch;
  for (std::size_t pi = 0; pi < t_->products.size(); ++pi) {
    const model::Product& p = t_->products[pi];
    const model::ProcessPlan* plan = t_->plan_for(p.part_number);
    std::int64_t quota = product_quota_[pi].next() + deferred_quota_[pi];
    std::int64_t released = 0;
    for (std::int64_t q = 0; q < quota && unfinished < wip_ceiling_; ++q, ++released) {
      ++unfinished;
      std::string wo = seq_id("WO-", ++wo_no_, 6);
      std::int64_t quantity = rng_orders_.uniform_int(1, 3);
      Minutes due = t + rng_orders_.uniform_int(7, 14) * 1440;
      batch.push_back({"work_order", {{{"nid", tx(wo)},
                                       {"part_number", tx(p.part_number)},
                                       {"program_code", tx(p.program_code)},
                                       {"status", tx("New")},
                                       {"quantity", iv(quantity)},
                                       {"expedited", bv(false)},
                                       {"due_date", iv(due)},
                                       {"current_seq", iv(plan->operations.front().seq)}}}});
      OrderRec rec;
      rec.nid = wo;
      rec.part_number = p.part_number;
      rec.total_ops = static_cast<int>(plan->operations.size());
      rec.quantity = static_cast<int>(quantity);
      orders_.emplace(wo, rec);
      ++sum_.orders_created;

      int ordinal = 0;
      for (const model::PlanOperation& pop : plan->operations) {
        ++ordinal;
        std::string opn = seq_id("OP-", ++op_no_, 6);
        batch.push_back({"work_order_operation", {{{"nid", tx(opn)},
                                                   {"order_nid", tx(wo)},
                                                   {"seq", iv(pop.seq)},
                                                   {"station_id", tx(pop.station_id)},
                                                   {"status", tx("New")},
                                                   {"queued_at", iv(t)}}}});
        OpRec op;
        op.nid = opn;
        op.order_nid = wo;
        op.station_id = pop.station_id;
        op.seq = pop.seq;
        op.ordinal = ordinal;
        ops_.emplace(opn, op);
        station_queues_[pop.station_id].push_back(opn);
        ++sum_.operations_created;

        int step_seq = 0;
        for (const model::StepTemplate& stp : t_->step_templates) {
          ++step_seq;
          char os[48];
          std::snprintf(os, sizeof(os), "OS-%s-%02d", opn.c_str() + 3, step_seq);
          batch.push_back({"operation_step", {{{"nid", tx(os)},
                                               {"operation_nid", tx(opn)},
                                               {"step_nid", tx(stp.nid)},
                                               {"seq", iv(step_seq)},
                                               {"std_minutes", iv(stp.std_minutes)}}}});
        }
      }
      for (int u = 1; u <= quantity; ++u) {
        char serial[32], mtu[32];
        std::snprintf(serial, sizeof(serial), "SN-%s-%02d", wo.c_str() + 3, u);
        std::snprintf(mtu, sizeof(mtu), "MTU-%s-%02d", wo.c_str() + 3, u);
        batch.push_back({"material_tracking_unit", {{{"nid", tx(mtu)},
                                                     {"serial", tx(serial)},
                                                     {"order_nid", tx(wo)},
                                                     {"part_number", tx(p.part_number)}}}});
      }
    }
    deferred_quota_[pi] = quota - released;
  }
  if (!batch.empty()) store_.insert_batch(batch, t);

  // periodic routing revision, recorded as a process change package
  int interval = t_->rates.bop_revision_interval_days;
  if (interval > 0 && operating_day_count_ % interval == 0 && !t_->process_plans.empty()) {
    std::size_t k = static_cast<std::size_t>(operating_day_count_ / interval - 1);
    const model::ProcessPlan& plan = t_->process_plans[k % t_->process_plans.size()];
    create_change_package(t, "PROCESS", "Routing revision " + plan.nid, plan.part_number,
                          plan.operations.front().station_id);
  }
}

void Engine::phase_schedule(Minutes t) {
  auto shift = cal_.shift_id_at(t);
  if (!shift) return;

  for (const model::Station& st : t_->stations) {
    std::vector<std::string>& queue = station_queues_[st.station_id];
    if (queue.empty()) continue;

    // expedited orders jump the line; FIFO within a priority class
    std::stable_sort(queue.begin(), queue.end(),
                     [this](const std::string& a, const std::string& b) {
                       const OpRec& oa = ops_.at(a);
                       const OpRec& ob = ops_.at(b);
                       bool ea = orders_.at(oa.order_nid).expedited;
                       bool eb = orders_.at(ob.order_nid).expedited;
                       if (ea != eb) return ea;
                       if (oa.order_nid != ob.order_nid) return oa.order_nid < ob.order_nid;
                       return oa.seq < ob.seq;
                     });

    bool station_supply_blocked = supply_blocked(st.station_id);
    std::vector<std::string> started;
    for (const std::string& opn : queue) {
      OpRec& op = ops_.at(opn);

      // gate 1: a unit at the station is free
      Unit* unit = nullptr;
      for (Unit& u : units_) {
        if (u.station_id == st.station_id && u.status == UnitStatus::Running && !u.busy &&
            !u.pm_due) {
          unit = &u;
          break;
        }
      }
      if (!unit) break;  // nothing can start here this minute
      // gate 2: no supply delay pinned to the station
      if (station_supply_blocked) break;
      // gate 3: the upstream operation is complete
      if (op.ordinal != orders_.at(op.order_nid).completed_ops + 1) continue;
      // gate 4: a certified operator is on shift and free
      Operator* opr = nullptr;
      for (Operator& o : operators_) {
        if (o.station_id == st.station_id && o.shift_id == *shift && !o.busy &&
            !operator_withheld(o.nid)) {
          opr = &o;
          break;
        }
      }
      if (!opr) break;

      int setup = static_cast<int>(
          rng_durations_.uniform_int(st.setup_time_min.lo, st.setup_time_min.hi));
      int cycle_hi = cfg_.stressful ? static_cast<int>(std::lround(
                                          st.cycle_time_min.hi *
                                          (1.0 + t_->rates.cycle_time_variance)))
                                    : st.cycle_time_min.hi;
      int cycle =
          static_cast<int>(rng_durations_.uniform_int(st.cycle_time_min.lo, cycle_hi));
      op.remaining = setup + cycle;
      op.duration = setup + cycle;
      op.planned_minutes = midpoint(st.setup_time_min) + midpoint(st.cycle_time_min);
      op.unit_nid = unit->nid;
      op.operator_nid = opr->nid;
      unit->busy = true;
      opr->busy = true;

      check_transition("operation", "New", "Active");
      store_.update_row("work_order_operation", opn,
                        {{"status", tx("Active")},
                         {"start_time", iv(t)},
                         {"setup_minutes", iv(setup)},
                         {"cycle_minutes", iv(cycle)},
                         {"equipment_nid", tx(unit->nid)},
                         {"operator_nid", tx(opr->nid)}},
                        t);
      OrderRec& order = orders_.at(op.order_nid);
      if (order.status == "New") {
        check_transition("work_order", "New", "Active");
        order.status = "Active";
        store_.update_row("work_order", order.nid, {{"status", tx("Active")}}, t);
      }
      store_.update_row("work_order", order.nid, {{"current_seq", iv(op.seq)}}, t);

      active_ops_.push_back(opn);
      ++sum_.stations[st.station_id].started;
      started.push_back(opn);
    }
    for (const std::string& opn : started) {
      queue.erase(std::find(queue.begin(), queue.end(), opn));
    }
  }
}

void Engine::phase_progress(Minutes t) {
  std::vector<std::string> finished;
  for (const std::string& opn : active_ops_) {
    OpRec& op = ops_.at(opn);
    const Unit* unit = find_unit(op.unit_nid);
    if (unit->status != UnitStatus::Running) continue;  // paused by downtime
    if (--op.remaining <= 0) finished.push_back(opn);
  }
  for (const std::string& opn : finished) {
    complete_operation(ops_.at(opn), t);
    active_ops_.erase(std::find(active_ops_.begin(), active_ops_.end(), opn));
  }
}

void Engine::complete_operation(OpRec& op, Minutes t) {
  check_transition("operation", "Active", "Complete");
  store_.update_row("work_order_operation", op.nid,
                    {{"status", tx("Complete")}, {"end_time", iv(t)}}, t);

  for (Unit& u : units_) {
    if (u.nid == op.unit_nid) u.busy = false;
  }
  for (Operator& o : operators_) {
    if (o.nid == op.operator_nid) o.busy = false;
  }

  ++sum_.operations_completed;
  StationRunStats& st = sum_.stations[op.station_id];
  ++st.completed;
  st.perf_ratio_sum +=
      std::min(1.0, static_cast<double>(op.planned_minutes) / std::max(1, op.duration));

  OrderRec& order = orders_.at(op.order_nid);
  std::vector<PendingRow> batch;

  // material draw from the open lot, FIFO with wraparound
  auto consume = t_->operation_material_consumption.find(op.station_id);
  if (consume != t_->operation_material_consumption.end()) {
    for (const std::string& mat : consume->second) {
      double qty = 1.0;
      auto pit = bom_qty_.find(order.part_number);
      if (pit != bom_qty_.end()) {
        auto sit = pit->second.find(op.station_id);
        if (sit != pit->second.end()) {
          auto mit = sit->second.find(mat);
          if (mit != sit->second.end()) qty = mit->second;
        }
      }
      qty *= order.quantity;
      LotCursor& cur = lot_cursor_.at(mat);
      const std::vector<std::string>& lots = material_lots_.at(mat);
      batch.push_back({"actual_consumed_material",
                       {{{"nid", seq_id("ACM-", ++acm_no_, 6)},
                         {"operation_nid", tx(op.nid)},
                         {"material_nid", tx(mat)},
                         {"lot_nid", tx(lots[cur.index])},
                         {"quantity", rv(qty)}}}});
      cur.remaining -= qty;
      if (cur.remaining <= 0.0) {
        cur.index = (cur.index + 1) % lots.size();
        cur.remaining = 50.0;
      }
    }
  }

  const model::Station* station = t_->find_station(op.station_id);
  if (station->is_quality_gate) evaluate_quality(op, t, batch);

  order.completed_ops = op.ordinal;
  if (op.ordinal == order.total_ops) {
    check_transition("work_order", "Active", "Complete");
    order.status = "Complete";
    store_.update_row("work_order", order.nid, {{"status", tx("Complete")}}, t);
    ++sum_.orders_completed;
  }

  if (!batch.empty()) store_.insert_batch(batch, t);
}

void Engine::evaluate_quality(const OpRec& op, Minutes t, std::vector<PendingRow>& out) {
  const model::Station& st = *t_->find_station(op.station_id);
  double fpy = st.first_pass_yield * (excursion_at(op.station_id) ? 0.7 : 1.0);
  bool passed = rng_quality_.bernoulli(fpy);

  StationRunStats& stats = sum_.stations[op.station_id];
  if (passed) {
    ++stats.samples_passed;
    ++sum_.samples_passed;
  } else {
    ++stats.samples_failed;
    ++sum_.samples_failed;
  }

  const std::string& plan_nid = t_->station_inspection_plans.at(op.station_id);
  const model::InspectionPlan& plan = *t_->find_inspection_plan(plan_nid);

  std::string sample = seq_id("IS-", ++sample_no_, 6);
  out.push_back({"inspection_sample", {{{"nid", tx(sample)},
                                        {"operation_nid", tx(op.nid)},
                                        {"plan_nid", tx(plan_nid)},
                                        {"station_id", tx(op.station_id)},
                                        {"passed", bv(passed)},
                                        {"sampled_at", iv(t)}}}});

  std::size_t fail_idx = plan.characteristics.size();  // none
  if (!passed && !plan.characteristics.empty()) {
    fail_idx = static_cast<std::size_t>(rng_quality_.uniform_int(
        0, static_cast<std::int64_t>(plan.characteristics.size()) - 1));
  }
  for (std::size_t i = 0; i < plan.characteristics.size(); ++i) {
    const model::Characteristic& ch = plan.characteristics[i];
    double w = ch.usl - ch.lsl;
    double measured;
    bool in_spec;
    if (i == fail_idx) {
      // out of spec beyond whichever limit sits farther from nominal
      bool high = (ch.usl - ch.nominal) >= (ch.nominal - ch.lsl);
      double d = w * (0.02 + 0.13 * rng_quality_.uniform01());
      measured = high ? ch.usl + d : ch.lsl - d;
      in_spec = false;
    } else {
      measured = ch.lsl + w * (0.05 + 0.9 * rng_quality_.uniform01());
      in_spec = true;
    }
    out.push_back({"inspection_value", {{{"nid", seq_id("IV-", ++value_no_, 6)},
                                         {"sample_nid", tx(sample)},
                                         {"characteristic_nid", tx(ch.nid)},
                                         {"measured", rv(measured)},
                                         {"in_spec", bv(in_spec)}}}});
  }

  if (!passed) create_ncr(op, t, out);
}

void Engine::create_ncr(const OpRec& op, Minutes t, std::vector<PendingRow>& out) {
  const std::vector<std::string>& codes = t_->station_failure_codes.at(op.station_id);
  const std::string& code = codes[static_cast<std::size_t>(
      rng_quality_.uniform_int(0, static_cast<std::int64_t>(codes.size()) - 1))];
  model::Severity severity = model::Severity::Minor;
  for (const model::FailureCode& fc : t_->failure_codes) {
    if (fc.nid == code) severity = fc.severity;
  }
  bool triggers = rng_quality_.bernoulli(t_->rates.capa_trigger_rate);

  std::string ncr = seq_id("NCR-", ++ncr_no_, 5);
  out.push_back({"non_conformance", {{{"nid", tx(ncr)},
                                      {"operation_nid", tx(op.nid)},
                                      {"order_nid", tx(op.order_nid)},
                                      {"station_id", tx(op.station_id)},
                                      {"failure_code_nid", tx(code)},
                                      {"severity", tx(model::to_string(severity))},
                                      {"status", tx("New")},
                                      {"triggers_capa", bv(triggers)},
                                      {"state_entered_at", iv(t)}}}});
  out.push_back({"defect", {{{"nid", seq_id("DEF-", ++defect_no_, 5)},
                             {"ncr_nid", tx(ncr)},
                             {"failure_code_nid", tx(code)},
                             {"station_id", tx(op.station_id)},
                             {"severity", tx(model::to_string(severity))},
                             {"quantity", iv(1)}}}});
  ++sum_.ncr_count;

  Minutes due = t + rng_lifecycle_.uniform_int(t_->ncr_status_durations.fresh.lo,
                                               t_->ncr_status_durations.fresh.hi);
  schedule_transition(due, {"ncr", ncr, "InProcess"});
}

void Engine::phase_equipment(Minutes t) {
  if (units_.empty()) return;
  const Unit& u = units_[static_cast<std::size_t>(sample_rr_) % units_.size()];
  ++sample_rr_;
  const char* status = u.status == UnitStatus::Running ? "RUNNING"
                       : u.status == UnitStatus::Down  ? "DOWN"
                                                       : "PM";
  store_.insert_batch({{"equipment_event", {{{"nid", seq_id("EE-", ++event_no_, 6)},
                                             {"equipment_nid", tx(u.nid)},
                                             {"event_type", tx("STATUS_SAMPLE")},
                                             {"status", tx(status)}}}}},
                      t);
}

void Engine::schedule_transition(Minutes due, PendingTransition tr) {
  pending_.emplace(due, std::move(tr));
}

void Engine::phase_lifecycle(Minutes t) {
  while (!pending_.empty() && pending_.begin()->first <= t) {
    PendingTransition tr = pending_.begin()->second;
    pending_.erase(pending_.begin());
    apply_transition(tr, t);
  }
}

void Engine::apply_transition(const PendingTransition& tr, Minutes t) {
  if (tr.entity == "ncr") {
    Row row = *store_.get("non_conformance", tr.nid);
    check_transition("ncr", row.text("status"), tr.to_status);
    std::map<std::string, Value> values{{"status", tx(tr.to_status)},
                                        {"state_entered_at", iv(t)}};
    if (tr.to_status == "Closed") {
      const auto& dispositions = t_->ncr_dispositions;
      values["disposition"] = tx(dispositions[static_cast<std::size_t>(
          rng_lifecycle_.uniform_int(0, static_cast<std::int64_t>(dispositions.size()) - 1))]);
    }
    store_.update_row("non_conformance", tr.nid, values, t);

    if (tr.to_status == "InProcess") {
      if (row.boolean("triggers_capa")) {
        // corrective for the serious findings, preventive for the minor ones
        bool minor = row.text("severity") == "MINOR";
        std::string owner = "OPR-001";
        for (const Operator& o : operators_) {
          if (o.station_id == row.text("station_id")) {
            owner = o.nid;
            break;
          }
        }
        std::string capa = seq_id("CAPA-", ++capa_no_, 4);
        store_.insert_batch(
            {{"quality_action",
              {{{"nid", tx(capa)},
                {"ncr_nid", tx(tr.nid)},
                {"capa_type", tx(minor ? "PREVENTIVE" : "CORRECTIVE")},
                {"status", tx("Open")},
                {"owner_nid", tx(owner)},
                {"due_date", iv(t + rng_lifecycle_.uniform_int(7, 21) * 1440)}}}}},
            t);
        ++sum_.capa_count;
        Minutes due = t + rng_lifecycle_.uniform_int(t_->change_package_params.approval_dwell_min.lo,
                                                     t_->change_package_params.approval_dwell_min.hi);
        schedule_transition(due, {"capa", capa, "InProgress"});
      }
      Minutes due = t + rng_lifecycle_.uniform_int(t_->ncr_status_durations.in_process.lo,
                                                   t_->ncr_status_durations.in_process.hi);
      schedule_transition(due, {"ncr", tr.nid, "PendingDisposition"});
    } else if (tr.to_status == "PendingDisposition") {
      Minutes due = t + rng_lifecycle_.uniform_int(t_->ncr_status_durations.pending_disposition.lo,
                                                   t_->ncr_status_durations.pending_disposition.hi);
      schedule_transition(due, {"ncr", tr.nid, "Closed"});
    }
    return;
  }

  if (tr.entity == "capa") {
    Row row = *store_.get("quality_action", tr.nid);
    check_transition("capa", row.text("status"), tr.to_status);
    store_.update_row("quality_action", tr.nid, {{"status", tx(tr.to_status)}}, t);
    if (tr.to_status == "InProgress") {
      Minutes due = t + rng_lifecycle_.uniform_int(t_->change_package_params.close_dwell_min.lo,
                                                   t_->change_package_params.close_dwell_min.hi);
      schedule_transition(due, {"capa", tr.nid, "Closed"});
    }
    return;
  }

  // change package
  Row row = *store_.get("change_package", tr.nid);
  check_transition("change_package", row.text("status"), tr.to_status);
  store_.update_row("change_package", tr.nid, {{"status", tx(tr.to_status)}}, t);
  Minutes due = 0;
  if (tr.to_status == "InReview") {
    due = t + rng_lifecycle_.uniform_int(t_->change_package_params.approval_dwell_min.lo,
                                         t_->change_package_params.approval_dwell_min.hi);
    schedule_transition(due, {"change_package", tr.nid, "Approved"});
  } else if (tr.to_status == "Approved") {
    due = t + rng_lifecycle_.uniform_int(240, 960);
    schedule_transition(due, {"change_package", tr.nid, "Released"});
  } else if (tr.to_status == "Released") {
    due = t + rng_lifecycle_.uniform_int(t_->change_package_params.close_dwell_min.lo,
                                         t_->change_package_params.close_dwell_min.hi);
    schedule_transition(due, {"change_package", tr.nid, "Closed"});
  }
}

void Engine::create_change_package(Minutes t, std::string type, std::string title,
                                   std::string part_number, std::string station_id) {
  std::string cp = seq_id("CP-", ++cp_no_, 4);
  if (type.empty()) {
    const auto& types = t_->change_package_params.types;
    type = types[static_cast<std::size_t>(
        rng_lifecycle_.uniform_int(0, static_cast<std::int64_t>(types.size()) - 1))];
  }
  if (part_number.empty()) {
    part_number = t_->products[static_cast<std::size_t>(rng_lifecycle_.uniform_int(
                                   0, static_cast<std::int64_t>(t_->products.size()) - 1))]
                      .part_number;
  }
  if (station_id.empty()) {
    station_id = t_->stations[static_cast<std::size_t>(rng_lifecycle_.uniform_int(
                                  0, static_cast<std::int64_t>(t_->stations.size()) - 1))]
                     .station_id;
  }
  if (title.empty()) {
    title = (type == "DESIGN" ? "Design update " : "Process update ") + cp.substr(3);
  }
  store_.insert_batch({{"change_package", {{{"nid", tx(cp)},
                                            {"change_type", tx(type)},
                                            {"status", tx("Draft")},
                                            {"title", tx(title)},
                                            {"part_number", tx(part_number)},
                                            {"station_id", tx(station_id)}}}}},
                      t);
  ++sum_.change_package_count;
  Minutes due = t + rng_lifecycle_.uniform_int(240, 960);
  schedule_transition(due, {"change_package", cp, "InReview"});
}

RunSummary Engine::summary() const {
  RunSummary s = sum_;
  s.throughput_per_day = s.days > 0 ? static_cast<double>(s.orders_created) / s.days : 0.0;
  std::int64_t samples = s.samples_passed + s.samples_failed;
  s.observed_fpy = samples > 0 ? static_cast<double>(s.samples_passed) / samples : 0.0;
  s.ncr_rate = s.operations_completed > 0
                   ? static_cast<double>(s.ncr_count) / s.operations_completed
                   : 0.0;
  s.avg_wip = wip_days_ > 0 ? static_cast<double>(wip_sum_) / wip_days_ : 0.0;
  s.oee_availability =
      scheduled_unit_minutes_ > 0
          ? 1.0 - static_cast<double>(s.downtime_working_minutes) / scheduled_unit_minutes_
          : 0.0;
  double ratio_sum = 0.0;
  std::int64_t completed = 0;
  for (const auto& [station, st] : s.stations) {
    ratio_sum += st.perf_ratio_sum;
    completed += st.completed;
  }
  s.oee_performance = completed > 0 ? ratio_sum / completed : 0.0;
  s.oee_quality = s.observed_fpy;
  s.oee = s.oee_availability * s.oee_performance * s.oee_quality;
  return s;
}

}  // namespace mfgsim::sim
