#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "mfgsim/model/parse.hpp"
#include "mfgsim/model/registry.hpp"
#include "mfgsim/model/validate.hpp"
#include "mfgsim/util/jsonl.hpp"

using namespace mfgsim;
using namespace mfgsim::model;

namespace {

const char* kTemplatesDir = MFGSIM_REPO_DIR "/templates";

std::string template_text(const std::string& id) {
  return read_text(std::string(kTemplatesDir) + "/" + id + ".json");
}

DomainTemplate load_valid(const std::string& id) {
  auto res = parse_template(template_text(id), id);
  REQUIRE_MESSAGE(res.ok(), res.error.summary());
  auto rep = validate_relations(res.value);
  REQUIRE_MESSAGE(rep.ok(), rep.summary());
  return res.value;
}

bool has_kind(const ValidationReport& rep, ViolationKind k) {
  return std::any_of(rep.violations.begin(), rep.violations.end(),
                     [&](const Violation& v) { return v.kind == k; });
}

struct Shape {
  const char* id;
  std::size_t stations;
  std::size_t failure_codes;
  std::size_t shifts;
  std::size_t gates;
  std::size_t products;
};

const Shape kShapes[] = {
    {"aerospace", 6, 24, 2, 6, 4},   {"pharma", 6, 27, 2, 6, 4},
    {"automotive", 6, 28, 3, 5, 4},  {"electronics", 6, 27, 2, 6, 4},
    {"beverages", 14, 28, 2, 14, 4}, {"warehousing", 6, 26, 3, 5, 4},
};

}  // namespace

TEST_CASE("shipped templates parse and validate") {
  for (const auto& s : kShapes) {
    CAPTURE(s.id);
    DomainTemplate t = load_valid(s.id);
    CHECK(t.template_id == s.id);
    CHECK(t.stations.size() == s.stations);
    CHECK(t.failure_codes.size() == s.failure_codes);
    CHECK(t.calendar.shifts.size() == s.shifts);
    CHECK(t.products.size() == s.products);
    std::size_t gates = 0;
    for (const auto& st : t.stations) gates += st.is_quality_gate ? 1 : 0;
    CHECK(gates == s.gates);
    // Every product routes through at least four stations.
    for (const auto& p : t.products) {
      const auto* plan = t.plan_for(p.part_number);
      REQUIRE(plan != nullptr);
      CHECK(plan->operations.size() >= 4);
    }
  }
}

TEST_CASE("cycle time extremes match the published envelope") {
  int lo = 1 << 30, hi = 0;
  for (const auto& s : kShapes) {
    DomainTemplate t = load_valid(s.id);
    for (const auto& st : t.stations) {
      lo = std::min(lo, st.cycle_time_min.lo);
      hi = std::max(hi, st.cycle_time_min.hi);
    }
  }
  CHECK(lo == 20);
  CHECK(hi == 720);
}

TEST_CASE("serialize then parse is the identity") {
  for (const auto& s : kShapes) {
    CAPTURE(s.id);
    DomainTemplate t = load_valid(s.id);
    ojson doc = serialize_template(t);
    auto res = parse_template(doc.dump(), s.id);
    REQUIRE_MESSAGE(res.ok(), res.error.summary());
    CHECK(res.value == t);
  }
}

TEST_CASE("unknown top-level keys are ignored") {
  ojson doc = ojson::parse(template_text("aerospace"));
  CHECK(doc.contains("_note"));  // shipped extras already exercise this
  doc["FUTURE_EXPORT"] = 17;
  auto res = parse_template(doc.dump(), "aerospace");
  CHECK(res.ok());
}

TEST_CASE("missing exports are reported by name, all of them") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc.erase("SUPPLIERS");
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE_FALSE(res.ok());
  REQUIRE(res.error.missing_exports.size() == 1);
  CHECK(res.error.missing_exports[0] == "SUPPLIERS");
  CHECK(res.error.field_errors.empty());

  doc.erase("STATIONS");
  doc.erase("CAPA_TRIGGER_RATE");
  res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.error.missing_exports.size() == 3);
  // Reported in canonical export order.
  CHECK(res.error.missing_exports[0] == "STATIONS");
  CHECK(res.error.missing_exports[1] == "SUPPLIERS");
  CHECK(res.error.missing_exports[2] == "CAPA_TRIGGER_RATE");
}

TEST_CASE("malformed fields carry their paths") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["STATIONS"]["S1"]["first_pass_yield"] = "high";
  doc["SHIFTS"][0].erase("start_min");
  doc["TARGET_OEE_RANGE"] = {0.85, 0.78};  // inverted
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.missing_exports.empty());
  auto has_path = [&](const std::string& p) {
    return std::any_of(res.error.field_errors.begin(), res.error.field_errors.end(),
                       [&](const FieldError& e) { return e.path == p; });
  };
  CHECK(has_path("STATIONS.S1.first_pass_yield"));
  CHECK(has_path("SHIFTS[0].start_min"));
  CHECK(has_path("TARGET_OEE_RANGE"));
}

TEST_CASE("json syntax errors surface as a root field error") {
  auto res = parse_template("{ not json", "x");
  REQUIRE_FALSE(res.ok());
  REQUIRE(res.error.field_errors.size() == 1);
  CHECK(res.error.field_errors[0].path == "$");
}

TEST_CASE("validation: two stations on one work center") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["STATIONS"]["S2"]["work_center"] = "WC-CNC";
  doc["STATION_TO_WC"]["S2"] = "WC-CNC";
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  REQUIRE_FALSE(rep.ok());
  CHECK(has_kind(rep, ViolationKind::SigmaInjectivity));
}

TEST_CASE("validation: routing step to unknown station") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["PROCESS_PLANS"][0]["operations"][2]["station_id"] = "S9";
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  CHECK(has_kind(rep, ViolationKind::RoutingIntegrity));
}

TEST_CASE("validation: quality gate with no failure codes") {
  ojson doc = ojson::parse(template_text("aerospace"));
  ojson kept = ojson::array();
  for (const auto& fc : doc["FAILURE_CODES"]) {
    if (fc["station_id"] != "S5") kept.push_back(fc);
  }
  doc["FAILURE_CODES"] = kept;
  doc["STATION_FAILURE_CODES"].erase("S5");
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  CHECK(has_kind(rep, ViolationKind::PhiSurjectivity));
}

TEST_CASE("validation: equipment level hierarchy") {
  ojson doc = ojson::parse(template_text("aerospace"));
  for (auto& node : doc["EQUIPMENT"]) {
    if (node["nid"] == "CNC-01") node["parent_nid"] = "AREA-FAB";  // skips WorkCenter
  }
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  CHECK(has_kind(rep, ViolationKind::Containment));
}

TEST_CASE("validation: material references resolve") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["RAW_MATERIALS"][0]["supplier_code"] = "SUP-NOBODY-01";
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  CHECK(has_kind(rep, ViolationKind::ReferenceIntegrity));
}

TEST_CASE("validation: work center with no units breaks routing") {
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["WORK_CENTER_UNITS"]["WC-NDT"] = ojson::array();
  ojson kept = ojson::array();
  for (const auto& node : doc["EQUIPMENT"]) {
    std::string nid = node["nid"];
    if (nid.rfind("NDT-", 0) != 0) kept.push_back(node);
  }
  doc["EQUIPMENT"] = kept;
  auto res = parse_template(doc.dump(), "aerospace");
  REQUIRE(res.ok());
  auto rep = validate_relations(res.value);
  CHECK(has_kind(rep, ViolationKind::RoutingIntegrity));
}

TEST_CASE("registry: load, swap, versioning, projection") {
  TemplateRegistry reg{kTemplatesDir};
  CHECK(reg.version() == 0);
  CHECK_THROWS_AS((void)reg.active(), std::logic_error);

  reg.load("aerospace");
  CHECK(reg.version() == 1);
  CHECK(reg.active_id() == "aerospace");
  auto aero = reg.active();
  CHECK(aero->plant_code == "AER1");

  std::vector<std::pair<std::string, std::uint64_t>> seen;
  auto token = reg.subscribe([&](const std::string& id, std::uint64_t v) {
    seen.emplace_back(id, v);
  });

  auto proj = reg.projection();
  CHECK(proj.version == 1);
  CHECK(proj.template_id == "aerospace");
  CHECK(proj.failure_codes.size() == 24);
  CHECK(proj.stations.size() == 6);

  reg.load("pharma");
  CHECK(reg.version() == 2);
  proj = reg.projection();
  CHECK(proj.failure_codes.size() == 27);
  CHECK(proj.template_id == "pharma");
  REQUIRE(seen.size() == 1);
  CHECK(seen[0].first == "pharma");
  CHECK(seen[0].second == 2);

  // The old handle stays usable after the swap.
  CHECK(aero->plant_code == "AER1");
  CHECK(reg.active()->plant_code == "PHM1");

  reg.unsubscribe(token);
  reg.load("aerospace");
  CHECK(seen.size() == 1);
}

TEST_CASE("registry: failed loads change nothing") {
  TemplateRegistry reg{kTemplatesDir};
  reg.load("aerospace");

  ojson broken = ojson::parse(template_text("pharma"));
  broken.erase("PRODUCTS");
  reg.register_document("broken-missing", broken.dump());

  ojson invalid = ojson::parse(template_text("pharma"));
  invalid["STATION_TO_WC"]["S2"] = "WC-DISPENSE";
  invalid["STATIONS"]["S2"]["work_center"] = "WC-DISPENSE";
  reg.register_document("broken-invalid", invalid.dump());

  CHECK_THROWS_AS(reg.load("broken-missing"), MissingExports);
  CHECK_THROWS_AS(reg.load("broken-invalid"), RelationalViolations);
  CHECK_THROWS_AS(reg.load("no-such-template"), UnknownTemplate);

  CHECK(reg.active_id() == "aerospace");
  CHECK(reg.version() == 1);
  CHECK(reg.projection().failure_codes.size() == 24);

  try {
    reg.load("broken-missing");
  } catch (const MissingExports& e) {
    REQUIRE(e.error.missing_exports.size() == 1);
    CHECK(e.error.missing_exports[0] == "PRODUCTS");
  }
}

TEST_CASE("registered documents shadow the directory") {
  TemplateRegistry reg{kTemplatesDir};
  ojson doc = ojson::parse(template_text("aerospace"));
  doc["PLANT_NAME"] = "Aerostructures Plant II";
  reg.register_document("aerospace", doc.dump());
  reg.load("aerospace");
  CHECK(reg.active()->plant_name == "Aerostructures Plant II");
}

TEST_CASE("vocabulary projection content") {
  DomainTemplate t = load_valid("aerospace");
  auto proj = vocabulary_projection(t, 7);
  CHECK(proj.version == 7);
  CHECK(proj.work_centers.size() == 6);
  CHECK(proj.products.size() == 4);
  // Two programs, deduplicated in first-seen order.
  REQUIRE(proj.program_codes.size() == 2);
  CHECK(proj.program_codes[0] == "PRG-NARROWBODY");
  CHECK(proj.program_codes[1] == "PRG-WIDEBODY");
  CHECK(proj.shifts == std::vector<std::string>{"DAY", "EVE"});
  CHECK(proj.severities == std::vector<std::string>{"MINOR", "MAJOR", "CRITICAL"});
  CHECK(proj.ncr_statuses ==
        std::vector<std::string>{"New", "InProcess", "PendingDisposition", "Closed"});
  CHECK(proj.ncr_dispositions ==
        std::vector<std::string>{"USE_AS_IS", "REWORK", "SCRAP", "RETURN_TO_SUPPLIER"});
  CHECK(proj.change_types == std::vector<std::string>{"PROCESS", "DESIGN"});
  // Equipment vocabulary spans the whole forest: site + area + 6 WC + 23 units.
  CHECK(proj.equipment.size() == 31);
  auto has_char = [&](const std::string& id) {
    return std::any_of(proj.characteristics.begin(), proj.characteristics.end(),
                       [&](const VocabEntry& e) { return e.id == id; });
  };
  CHECK(has_char("CH-BONDLINE-THK"));
  CHECK(has_char("CH-TORQUE-NM"));
}

TEST_CASE("lifecycle enums are fixed") {
  CHECK(lifecycle::operation_statuses() ==
        std::vector<std::string>{"New", "Active", "Complete", "Aborted"});
  CHECK(lifecycle::work_order_statuses() ==
        std::vector<std::string>{"Edit", "New", "Active", "Complete", "Aborted"});
  CHECK(lifecycle::equipment_statuses() ==
        std::vector<std::string>{"RUNNING", "IDLE", "DOWN", "PM"});
  CHECK(lifecycle::change_types() ==
        std::vector<std::string>{"PROCESS", "DESIGN", "DOCUMENT"});
}
