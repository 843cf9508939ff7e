#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mfgsim/model/domain_template.hpp"
#include "mfgsim/sim/calendar.hpp"
#include "mfgsim/sim/lifecycle.hpp"
#include "mfgsim/sim/quota.hpp"
#include "mfgsim/store/store.hpp"
#include "mfgsim/util/rng.hpp"

namespace mfgsim::sim {

// 2025-01-06 00:00 UTC, a Monday: the default origin for runs and reports.
Minutes canonical_start();

struct RunConfig {
  std::uint64_t seed = 42;
  int days = 30;
  Minutes start = 0;  // midnight of the first day
  bool stressful = false;
};

struct StationRunStats {
  std::int64_t started = 0;
  std::int64_t completed = 0;
  std::int64_t samples_passed = 0;
  std::int64_t samples_failed = 0;
  double perf_ratio_sum = 0.0;  // sum of min(1, planned/actual) over completions
};

struct RunSummary {
  std::string template_id;
  std::uint64_t seed = 0;
  int days = 0;
  Minutes start = 0;
  Minutes end = 0;

  std::int64_t orders_created = 0;
  std::int64_t orders_completed = 0;
  std::int64_t operations_created = 0;
  std::int64_t operations_completed = 0;
  std::int64_t ncr_count = 0;
  std::int64_t capa_count = 0;
  std::int64_t change_package_count = 0;
  std::int64_t samples_passed = 0;
  std::int64_t samples_failed = 0;
  std::int64_t breakdown_count = 0;
  std::int64_t downtime_working_minutes = 0;  // breakdown + PM, working time only

  double throughput_per_day = 0.0;  // orders created / calendar days
  double observed_fpy = 0.0;        // passed / (passed + failed) at gates
  double ncr_rate = 0.0;            // NCRs / completed operations
  double avg_wip = 0.0;             // mean of the daily snapshots
  double oee_availability = 0.0;
  double oee_performance = 0.0;
  double oee_quality = 0.0;
  double oee = 0.0;

  std::map<std::string, StationRunStats> stations;
};

// Deterministic time-stepped plant simulator. One step is one simulated
// minute; non-working minutes are skipped in bulk. All writes flow through
// the store so the changelog is the complete, ordered history of the run.
class Engine {
 public:
  Engine(std::shared_ptr<const model::DomainTemplate> t, const RunConfig& cfg);

  // Advances one simulated minute. Returns false once the window is done.
  bool step();
  void run();

  Minutes now() const { return now_; }
  Minutes end_time() const { return end_; }

  store::Store& store() { return store_; }
  const store::Store& store() const { return store_; }

  RunSummary summary() const;

 private:
  enum class UnitStatus { Running, Down, Pm };
  struct Unit {
    std::string nid;
    std::string station_id;
    UnitStatus status = UnitStatus::Running;
    bool busy = false;
    double breakdown_countdown = 0.0;  // working minutes until next failure
    Minutes status_until = 0;          // wall recovery time for Down/Pm
    Minutes status_since = 0;
    bool pm_due = false;
    int pm_minutes = 0;
  };
  struct Operator {
    std::string nid;
    std::string shift_id;
    std::string station_id;
    bool busy = false;
  };
  struct OrderRec {
    std::string nid;
    std::string part_number;
    int total_ops = 0;
    int completed_ops = 0;  // ordinal progress; plan seq numbers may be 10, 20, ...
    int quantity = 1;
    bool expedited = false;
    std::string status = "New";
  };
  struct OpRec {
    std::string nid;
    std::string order_nid;
    std::string station_id;
    int seq = 0;      // plan-native routing number
    int ordinal = 0;  // 1-based position in the plan
    int remaining = 0;
    int duration = 0;         // setup + cycle as drawn
    int planned_minutes = 0;  // station midpoint, for the performance ratio
    std::string unit_nid;
    std::string operator_nid;
  };
  enum class DisruptionKind { SupplyDelay, QualityExcursion, OperatorShortage };
  struct ActiveDisruption {
    DisruptionKind kind;
    std::string station_id;          // supply + excursion target
    std::vector<std::string> operators;  // shortage: withheld operator nids
    int remaining_working = 0;
  };
  struct PendingTransition {
    std::string entity;  // "ncr" | "capa" | "change_package"
    std::string nid;
    std::string to_status;
  };

  void tick_working(Minutes t);
  void phase_disruptions(Minutes t);
  void phase_daily(Minutes t);
  void phase_schedule(Minutes t);
  void phase_progress(Minutes t);
  void phase_equipment(Minutes t);
  void phase_lifecycle(Minutes t);

  void start_pm(Unit& u, Minutes t);
  void finish_downtime(Unit& u, Minutes t);
  void set_unit_status(Unit& u, UnitStatus to, Minutes t, const std::string& event_type,
                       std::optional<std::int64_t> duration);
  void complete_operation(OpRec& op, Minutes t);
  void evaluate_quality(const OpRec& op, Minutes t, std::vector<store::PendingRow>& out);
  void create_ncr(const OpRec& op, Minutes t, std::vector<store::PendingRow>& out);
  void schedule_transition(Minutes due, PendingTransition tr);
  void apply_transition(const PendingTransition& tr, Minutes t);
  // Empty type/part/station are drawn; a BOP revision passes them explicitly.
  void create_change_package(Minutes t, std::string type, std::string title,
                             std::string part_number, std::string station_id);
  double working_exponential(Rng& rng, double mean) const;

  const Unit* find_unit(const std::string& nid) const;
  int on_shift_operator_count(const std::string& shift_id) const;
  bool operator_withheld(const std::string& nid) const;
  bool supply_blocked(const std::string& station_id) const;
  bool excursion_at(const std::string& station_id) const;

  std::shared_ptr<const model::DomainTemplate> t_;
  RunConfig cfg_;
  WorkCalendar cal_;
  store::Store store_;

  Minutes start_ = 0;
  Minutes end_ = 0;
  Minutes now_ = 0;

  Rng rng_orders_;
  Rng rng_durations_;
  Rng rng_quality_;
  Rng rng_breakdown_;
  Rng rng_disrupt_;
  Rng rng_lifecycle_;
  Rng rng_expedite_;

  std::vector<Unit> units_;
  std::vector<Operator> operators_;
  std::map<std::string, OrderRec> orders_;
  std::map<std::string, OpRec> ops_;
  std::map<std::string, std::vector<std::string>> station_queues_;  // station -> op nids
  std::vector<std::string> active_ops_;  // start order

  std::vector<FractionalAccumulator> product_quota_;
  std::vector<std::int64_t> deferred_quota_;  // quota held back by the WIP ceiling
  std::int64_t wip_ceiling_ = 0;              // release stops while unfinished orders >= this
  std::vector<ActiveDisruption> disruptions_;
  double supply_countdown_ = 0.0;
  double excursion_countdown_ = 0.0;
  double shortage_countdown_ = 0.0;
  double change_countdown_ = 0.0;
  double expedite_countdown_ = 0.0;
  std::multimap<Minutes, PendingTransition> pending_;

  // in-memory lot cursors: material -> (lot index, remaining quantity)
  struct LotCursor {
    std::size_t index = 0;
    double remaining = 0.0;
  };
  std::map<std::string, std::vector<std::string>> material_lots_;
  std::map<std::string, LotCursor> lot_cursor_;
  // part -> station -> material -> qty per unit
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> bom_qty_;

  // weekly PM: one block per work center, staggered across Monday
  std::vector<std::pair<std::string, std::vector<std::size_t>>> wc_units_;  // wc -> unit indices
  std::vector<int> pm_stagger_;      // minute of day the block may start
  std::vector<std::int64_t> pm_week_fired_;
  int pm_block_minutes_ = 0;

  std::vector<std::string> supply_stations_;  // stations that consume material
  std::vector<std::string> gate_stations_;

  int operating_day_count_ = 0;
  int sample_rr_ = 0;  // equipment round-robin cursor
  std::int64_t wip_sum_ = 0;
  std::int64_t wip_days_ = 0;
  std::int64_t scheduled_unit_minutes_ = 0;

  int wo_no_ = 0, op_no_ = 0, ncr_no_ = 0, capa_no_ = 0, cp_no_ = 0, sample_no_ = 0,
      value_no_ = 0, acm_no_ = 0, event_no_ = 0, defect_no_ = 0, wip_no_ = 0;

  RunSummary sum_;
};

}  // namespace mfgsim::sim
