#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mfgsim/model/registry.hpp"
#include "mfgsim/sim/engine.hpp"
#include "mfgsim/util/jsonl.hpp"
#include "mfgsim/util/sim_time.hpp"

using namespace mfgsim;
using namespace mfgsim::sim;

namespace {

namespace fs = std::filesystem;

std::shared_ptr<const model::DomainTemplate> load(const std::string& id) {
  static model::TemplateRegistry reg(std::string(MFGSIM_REPO_DIR) + "/templates");
  reg.load(id);
  return reg.active();
}

const Minutes kMonday = to_minutes({2025, 1, 6, 0, 0});

RunConfig config(std::uint64_t seed, int days, bool stressful = false) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.days = days;
  cfg.start = kMonday;
  cfg.stressful = stressful;
  return cfg;
}

fs::path fresh_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("30-day aerospace run hits the volume envelope") {
  Engine eng(load("aerospace"), config(42, 30));
  CHECK(eng.store().total_row_count() == 495);  // reference data before any tick
  eng.run();
  RunSummary s = eng.summary();

  // demand is quota-driven, so creation counts are exact
  CHECK(s.orders_created == 240);
  CHECK(s.operations_created == 1440);
  CHECK(s.throughput_per_day == 8.0);

  CHECK(s.ncr_count >= 70);
  CHECK(s.ncr_count <= 85);
  CHECK(eng.store().total_row_count() >= 15000);
  CHECK(eng.store().total_row_count() <= 18000);

  // most of the pipeline drains by the end of the window
  CHECK(s.orders_completed > 200);
  CHECK(s.operations_completed > 1300);
  CHECK(s.observed_fpy > 0.92);
  CHECK(s.observed_fpy < 0.98);
  CHECK(s.avg_wip > 5.0);
  CHECK(s.avg_wip < 40.0);

  // OEE decomposes into the three classic factors
  CHECK(s.oee == doctest::Approx(s.oee_availability * s.oee_performance * s.oee_quality));
  CHECK(s.oee > 0.7);
  CHECK(s.oee < 0.9);
}

TEST_CASE("same seed, same bytes") {
  fs::path dir = fresh_dir("mfgsim_engine_det");
  std::string a, b;
  for (int round = 0; round < 2; ++round) {
    Engine eng(load("aerospace"), config(42, 10));
    eng.run();
    fs::path out = dir / (round == 0 ? "a.jsonl" : "b.jsonl");
    eng.store().export_events_jsonl(out);
    (round == 0 ? a : b) = read_text(out);
  }
  CHECK(a.size() > 100000);
  CHECK(a == b);
  fs::remove_all(dir);
}

TEST_CASE("different seeds diverge") {
  Engine e1(load("aerospace"), config(42, 10));
  Engine e2(load("aerospace"), config(43, 10));
  e1.run();
  e2.run();
  CHECK(e1.summary().samples_passed != e2.summary().samples_passed);
}

TEST_CASE("stressful profile degrades the stable KPIs") {
  Engine stable(load("aerospace"), config(42, 30));
  Engine stressed(load("aerospace"), config(42, 30, true));
  stable.run();
  stressed.run();
  RunSummary a = stable.summary(), b = stressed.summary();

  CHECK(b.observed_fpy < a.observed_fpy);
  CHECK(b.throughput_per_day < a.throughput_per_day);  // WIP ceiling throttles release
  CHECK(b.ncr_rate > a.ncr_rate);
}

TEST_CASE("every order and operation ends in a legal state") {
  Engine eng(load("aerospace"), config(42, 30));
  eng.run();
  const store::Store& st = eng.store();

  std::set<std::string> order_states, op_states;
  int complete_orders = 0;
  for (const auto& row : st.scan("work_order")) {
    order_states.insert(row.text("status"));
    complete_orders += row.text("status") == "Complete";
  }
  for (const auto& row : st.scan("work_order_operation")) {
    op_states.insert(row.text("status"));
    if (row.text("status") == "Complete") {
      CHECK(row.integer_opt("start_time").has_value());
      CHECK(row.integer_opt("end_time").has_value());
      CHECK(row.text_opt("equipment_nid").has_value());
      CHECK(row.text_opt("operator_nid").has_value());
    }
  }
  for (const std::string& s : order_states) CHECK((s == "New" || s == "Active" || s == "Complete"));
  for (const std::string& s : op_states) CHECK((s == "New" || s == "Active" || s == "Complete"));
  CHECK(complete_orders == eng.summary().orders_completed);
}

TEST_CASE("drawn durations stay inside the configured station ranges") {
  auto t = load("aerospace");
  Engine eng(t, config(42, 30));
  eng.run();

  for (const auto& row : eng.store().scan("work_order_operation")) {
    auto setup = row.integer_opt("setup_minutes");
    if (!setup) continue;  // never started
    const model::Station* st = t->find_station(row.text("station_id"));
    REQUIRE(st != nullptr);
    CHECK(*setup >= st->setup_time_min.lo);
    CHECK(*setup <= st->setup_time_min.hi);
    std::int64_t cycle = *row.integer_opt("cycle_minutes");
    CHECK(cycle >= st->cycle_time_min.lo);
    CHECK(cycle <= st->cycle_time_min.hi);
  }
}

TEST_CASE("inspection failures carry the full quality trail") {
  auto t = load("aerospace");
  Engine eng(t, config(42, 30));
  eng.run();
  const store::Store& st = eng.store();

  std::int64_t failed_samples = 0;
  for (const auto& row : st.scan("inspection_sample")) {
    failed_samples += !row.boolean("passed");
  }
  // one NCR and one defect per failed sample
  CHECK(failed_samples == st.row_count("non_conformance"));
  CHECK(failed_samples == st.row_count("defect"));
  CHECK(failed_samples == eng.summary().samples_failed);

  // failed samples have at least one out-of-spec measurement, passes have none
  std::map<std::string, bool> sample_passed;
  for (const auto& row : st.scan("inspection_sample")) {
    sample_passed[row.text("nid")] = row.boolean("passed");
  }
  std::map<std::string, int> oos_per_sample;
  for (const auto& row : st.scan("inspection_value")) {
    if (!row.boolean("in_spec")) ++oos_per_sample[row.text("sample_nid")];
  }
  for (const auto& [nid, passed] : sample_passed) {
    if (passed) {
      CHECK(oos_per_sample.count(nid) == 0);
    } else {
      CHECK(oos_per_sample[nid] == 1);
    }
  }

  // NCR failure codes belong to the station that raised them
  for (const auto& row : st.scan("non_conformance")) {
    auto codes = t->station_failure_codes.at(row.text("station_id"));
    bool found = false;
    for (const auto& c : codes) found |= c == row.text("failure_code_nid");
    CHECK(found);
  }
}

TEST_CASE("material consumption draws from seeded lots") {
  auto t = load("aerospace");
  Engine eng(t, config(42, 30));
  eng.run();
  const store::Store& st = eng.store();

  CHECK(st.row_count("actual_consumed_material") > 1000);
  for (const auto& row : st.scan("actual_consumed_material")) {
    CHECK(row.real("quantity") > 0.0);
    // lot -> material agreement
    auto lot = st.get("material_lot", row.text("lot_nid"));
    REQUIRE(lot.has_value());
    CHECK(lot->text("material_nid") == row.text("material_nid"));
  }
}

TEST_CASE("equipment events sample every unit") {
  Engine eng(load("aerospace"), config(42, 30));
  eng.run();
  const store::Store& st = eng.store();

  std::set<std::string> sampled;
  std::int64_t samples = 0, breakdowns = 0, ends = 0;
  for (const auto& row : st.scan("equipment_event")) {
    const std::string type = row.text("event_type");
    if (type == "STATUS_SAMPLE") {
      ++samples;
      sampled.insert(row.text("equipment_nid"));
    } else if (type == "BREAKDOWN") {
      ++breakdowns;
    } else if (type == "BREAKDOWN_END") {
      ++ends;
      CHECK(row.integer_opt("duration_min").has_value());
    }
  }
  CHECK(sampled.size() == 23);  // round-robin reaches every unit
  CHECK(samples > 1000);
  CHECK(breakdowns == eng.summary().breakdown_count);
  CHECK(ends <= breakdowns);  // a unit can still be down at the horizon
}

TEST_CASE("quality lifecycle advances NCRs toward disposition") {
  auto t = load("aerospace");
  Engine eng(t, config(42, 30));
  eng.run();
  const store::Store& st = eng.store();

  int closed = 0;
  std::set<std::string> dispositions(t->ncr_dispositions.begin(), t->ncr_dispositions.end());
  for (const auto& row : st.scan("non_conformance")) {
    const std::string status = row.text("status");
    CHECK((status == "New" || status == "InProcess" || status == "PendingDisposition" ||
           status == "Closed"));
    auto disp = row.text_opt("disposition");
    if (status == "Closed") {
      ++closed;
      REQUIRE(disp.has_value());
      CHECK(dispositions.count(*disp) == 1);
    } else {
      CHECK_FALSE(disp.has_value());
    }
  }
  CHECK(closed > 0);  // month-long run closes most of the early NCRs

  // every CAPA hangs off an NCR that asked for one
  for (const auto& row : st.scan("quality_action")) {
    auto ncr = st.get("non_conformance", row.text("ncr_nid"));
    REQUIRE(ncr.has_value());
    CHECK(ncr->boolean("triggers_capa"));
    CHECK((row.text("capa_type") == "CORRECTIVE" || row.text("capa_type") == "PREVENTIVE"));
  }
}

TEST_CASE("change packages walk the review pipeline") {
  Engine eng(load("aerospace"), config(42, 30));
  eng.run();

  int past_draft = 0;
  for (const auto& row : eng.store().scan("change_package")) {
    const std::string status = row.text("status");
    CHECK((status == "Draft" || status == "InReview" || status == "Approved" ||
           status == "Released" || status == "Closed"));
    past_draft += status != "Draft";
  }
  CHECK(eng.store().row_count("change_package") > 0);
  CHECK(past_draft > 0);
}

TEST_CASE("all six templates run their 30-day stable windows") {
  struct Expect {
    const char* id;
    std::int64_t orders;
    double throughput;
  };
  // one quota-exact creation count per template
  const Expect plan[] = {{"aerospace", 240, 8.0},   {"pharma", 360, 12.0},
                         {"automotive", 480, 16.0}, {"electronics", 600, 20.0},
                         {"beverages", 300, 10.0},  {"warehousing", 720, 24.0}};
  for (const Expect& e : plan) {
    CAPTURE(e.id);
    Engine eng(load(e.id), config(42, 30));
    eng.run();
    RunSummary s = eng.summary();
    CHECK(s.orders_created == e.orders);
    CHECK(s.throughput_per_day == doctest::Approx(e.throughput));
    CHECK(s.observed_fpy > 0.9);
    CHECK(s.ncr_count > 0);
    CHECK(s.orders_completed > e.orders * 9 / 10);
  }
}
