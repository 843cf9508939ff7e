#include "mfgsim/model/parse.hpp"

#include <algorithm>
#include <sstream>

namespace mfgsim::model {

std::string to_string(Severity s) {
  switch (s) {
    case Severity::Minor: return "MINOR";
    case Severity::Major: return "MAJOR";
    case Severity::Critical: return "CRITICAL";
  }
  return "MINOR";
}

std::optional<Severity> severity_from_string(const std::string& s) {
  if (s == "MINOR") return Severity::Minor;
  if (s == "MAJOR") return Severity::Major;
  if (s == "CRITICAL") return Severity::Critical;
  return std::nullopt;
}

std::string to_string(EquipmentLevel l) {
  switch (l) {
    case EquipmentLevel::Site: return "Site";
    case EquipmentLevel::Area: return "Area";
    case EquipmentLevel::WorkCenter: return "WorkCenter";
    case EquipmentLevel::Unit: return "Unit";
    case EquipmentLevel::Instrument: return "Instrument";
  }
  return "Unit";
}

std::optional<EquipmentLevel> equipment_level_from_string(const std::string& s) {
  if (s == "Site") return EquipmentLevel::Site;
  if (s == "Area") return EquipmentLevel::Area;
  if (s == "WorkCenter") return EquipmentLevel::WorkCenter;
  if (s == "Unit") return EquipmentLevel::Unit;
  if (s == "Instrument") return EquipmentLevel::Instrument;
  return std::nullopt;
}

const Station* DomainTemplate::find_station(const std::string& station_id) const {
  for (const auto& s : stations)
    if (s.station_id == station_id) return &s;
  return nullptr;
}

const Product* DomainTemplate::find_product(const std::string& part_number) const {
  for (const auto& p : products)
    if (p.part_number == part_number) return &p;
  return nullptr;
}

const ProcessPlan* DomainTemplate::plan_for(const std::string& part_number) const {
  for (const auto& p : process_plans)
    if (p.part_number == part_number) return &p;
  return nullptr;
}

const InspectionPlan* DomainTemplate::find_inspection_plan(const std::string& nid) const {
  for (const auto& p : inspection_plans)
    if (p.nid == nid) return &p;
  return nullptr;
}

const std::vector<std::string>& export_names() {
  static const std::vector<std::string> names = {
      "PLANT_CODE", "PLANT_NAME", "SHIFTS", "OPERATING_DAYS",
      "BREAK_DURATION_MIN", "WEEKLY_PM_HOURS", "TARGET_OEE_RANGE",
      "FIRST_PASS_YIELD_RANGE", "AVG_WIP_RANGE", "OPERATORS_PER_SHIFT",
      "EQUIPMENT", "WORK_CENTER_UNITS", "PRODUCTS", "WORKING_DAYS_PER_YEAR",
      "STATIONS", "STATION_TO_WC", "RAW_MATERIALS", "FINISHED_MATERIALS",
      "PRODUCT_RAW_MATERIAL", "OPERATION_MATERIAL_CONSUMPTION", "SUPPLIERS",
      "FAILURE_CODES", "STATION_FAILURE_CODES", "PROCESS_PLANS",
      "INSPECTION_PLANS", "STATION_INSPECTION_PLANS", "NCR_DISPOSITIONS",
      "NCR_STATUS_DURATIONS", "CAPA_TRIGGER_RATE", "EQUIPMENT_DOWNTIME_PROB",
      "EQUIPMENT_DOWNTIME_DURATION_MIN", "ORDER_EXPEDITE_RATE",
      "BOP_REVISION_INTERVAL_DAYS", "CYCLE_TIME_VARIANCE",
      "DEFAULT_RANDOM_SEED", "CERTIFICATIONS", "STATION_CERTIFICATIONS",
      "SKILLS", "STATION_SKILLS", "TOOL_DEFINITIONS", "STATION_TOOLS",
      "STEP_TEMPLATES", "CHANGE_PACKAGE_RATE", "CHANGE_PACKAGE_PARAMS",
      "BOM_STATION_MATERIALS"};
  return names;
}

std::string ParseError::summary() const {
  std::ostringstream ss;
  if (!missing_exports.empty()) {
    ss << "missing exports:";
    for (const auto& m : missing_exports) ss << ' ' << m;
    ss << ". ";
  }
  for (const auto& f : field_errors) ss << f.path << ": " << f.message << ". ";
  return ss.str();
}

namespace {

const std::vector<std::string> kDayNames = {"Mon", "Tue", "Wed", "Thu",
                                            "Fri", "Sat", "Sun"};

class Reader {
 public:
  explicit Reader(ParseError& err) : err_(err) {}

  void fail(const std::string& path, const std::string& msg) {
    err_.field_errors.push_back({path, msg});
  }

  std::string str(const ojson& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected string");
      return {};
    }
    return j.get<std::string>();
  }

  double num(const ojson& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "expected number");
      return 0.0;
    }
    return j.get<double>();
  }

  int integer(const ojson& j, const std::string& path) {
    if (!j.is_number_integer()) {
      fail(path, "expected integer");
      return 0;
    }
    return j.get<int>();
  }

  bool boolean(const ojson& j, const std::string& path) {
    if (!j.is_boolean()) {
      fail(path, "expected boolean");
      return false;
    }
    return j.get<bool>();
  }

  Range range(const ojson& j, const std::string& path) {
    Range r;
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      fail(path, "expected two-element numeric array");
      return r;
    }
    r.lo = j[0].get<double>();
    r.hi = j[1].get<double>();
    if (r.lo > r.hi) fail(path, "low bound exceeds high bound");
    return r;
  }

  MinuteRange minute_range(const ojson& j, const std::string& path) {
    MinuteRange r;
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
        !j[1].is_number_integer()) {
      fail(path, "expected two-element integer array");
      return r;
    }
    r.lo = j[0].get<int>();
    r.hi = j[1].get<int>();
    if (r.lo > r.hi) fail(path, "low bound exceeds high bound");
    if (r.lo < 0) fail(path, "negative minutes");
    return r;
  }

  std::vector<std::string> str_list(const ojson& j, const std::string& path) {
    std::vector<std::string> out;
    if (!j.is_array()) {
      fail(path, "expected array of strings");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(str(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::map<std::string, std::vector<std::string>> str_list_map(
      const ojson& j, const std::string& path) {
    std::map<std::string, std::vector<std::string>> out;
    if (!j.is_object()) {
      fail(path, "expected object of string arrays");
      return out;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      out[it.key()] = str_list(it.value(), path + "." + it.key());
    return out;
  }

  std::map<std::string, std::string> str_map(const ojson& j, const std::string& path) {
    std::map<std::string, std::string> out;
    if (!j.is_object()) {
      fail(path, "expected object of strings");
      return out;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      out[it.key()] = str(it.value(), path + "." + it.key());
    return out;
  }

 private:
  ParseError& err_;
};

}  // namespace

ParseResult parse_template(const std::string& json_text, const std::string& template_id) {
  ParseResult res;
  res.value.template_id = template_id;
  Reader rd(res.error);

  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const std::exception& e) {
    rd.fail("$", std::string("invalid JSON: ") + e.what());
    return res;
  }
  if (!doc.is_object()) {
    rd.fail("$", "top level must be an object");
    return res;
  }

  for (const auto& name : export_names())
    if (!doc.contains(name)) res.error.missing_exports.push_back(name);
  if (!res.error.missing_exports.empty()) return res;

  DomainTemplate& t = res.value;

  t.plant_code = rd.str(doc["PLANT_CODE"], "PLANT_CODE");
  t.plant_name = rd.str(doc["PLANT_NAME"], "PLANT_NAME");

  {
    const auto& j = doc["SHIFTS"];
    if (!j.is_array() || j.empty()) {
      rd.fail("SHIFTS", "expected non-empty array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "SHIFTS[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        Shift s;
        s.shift_id = rd.str(j[i].value("shift_id", ojson()), p + ".shift_id");
        s.name = rd.str(j[i].value("name", ojson()), p + ".name");
        s.start_min = rd.integer(j[i].value("start_min", ojson()), p + ".start_min");
        s.end_min = rd.integer(j[i].value("end_min", ojson()), p + ".end_min");
        if (s.start_min < 0 || s.start_min >= 1440 || s.end_min < 0 || s.end_min > 1440)
          rd.fail(p, "shift minutes out of day range");
        t.calendar.shifts.push_back(std::move(s));
      }
    }
  }

  {
    auto days = rd.str_list(doc["OPERATING_DAYS"], "OPERATING_DAYS");
    for (const auto& d : days) {
      auto it = std::find(kDayNames.begin(), kDayNames.end(), d);
      if (it == kDayNames.end())
        rd.fail("OPERATING_DAYS", "unknown day name: " + d);
      else
        t.calendar.operating_days.push_back(
            static_cast<int>(it - kDayNames.begin()));
    }
    if (t.calendar.operating_days.empty())
      rd.fail("OPERATING_DAYS", "no operating days");
  }

  t.calendar.break_duration_min =
      rd.integer(doc["BREAK_DURATION_MIN"], "BREAK_DURATION_MIN");
  t.weekly_pm_hours = rd.num(doc["WEEKLY_PM_HOURS"], "WEEKLY_PM_HOURS");
  t.targets.oee = rd.range(doc["TARGET_OEE_RANGE"], "TARGET_OEE_RANGE");
  t.targets.first_pass_yield =
      rd.range(doc["FIRST_PASS_YIELD_RANGE"], "FIRST_PASS_YIELD_RANGE");
  t.targets.avg_wip = rd.range(doc["AVG_WIP_RANGE"], "AVG_WIP_RANGE");
  t.targets.operators_per_shift =
      rd.integer(doc["OPERATORS_PER_SHIFT"], "OPERATORS_PER_SHIFT");

  for (const char* key : {"TARGET_OEE_RANGE", "FIRST_PASS_YIELD_RANGE"}) {
    Range r = (std::string(key) == "TARGET_OEE_RANGE") ? t.targets.oee
                                                       : t.targets.first_pass_yield;
    if (r.lo <= 0.0 || r.hi > 1.0) rd.fail(key, "ratio range must satisfy 0 < low <= high <= 1");
  }

  {
    const auto& j = doc["EQUIPMENT"];
    if (!j.is_array()) {
      rd.fail("EQUIPMENT", "expected array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "EQUIPMENT[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        EquipmentNode n;
        n.nid = rd.str(j[i].value("nid", ojson()), p + ".nid");
        n.name = rd.str(j[i].value("name", ojson()), p + ".name");
        auto level = rd.str(j[i].value("level", ojson()), p + ".level");
        if (auto l = equipment_level_from_string(level))
          n.level = *l;
        else
          rd.fail(p + ".level", "unknown level: " + level);
        if (j[i].contains("parent_nid") && !j[i]["parent_nid"].is_null())
          n.parent_nid = rd.str(j[i]["parent_nid"], p + ".parent_nid");
        t.equipment.push_back(std::move(n));
      }
    }
  }

  t.work_center_units = rd.str_list_map(doc["WORK_CENTER_UNITS"], "WORK_CENTER_UNITS");

  {
    const auto& j = doc["PRODUCTS"];
    if (!j.is_array() || j.empty()) {
      rd.fail("PRODUCTS", "expected non-empty array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "PRODUCTS[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        Product prod;
        prod.part_number = rd.str(j[i].value("part_number", ojson()), p + ".part_number");
        prod.name = rd.str(j[i].value("name", ojson()), p + ".name");
        prod.program_code = rd.str(j[i].value("program_code", ojson()), p + ".program_code");
        prod.annual_volume = rd.integer(j[i].value("annual_volume", ojson()), p + ".annual_volume");
        if (prod.annual_volume <= 0) rd.fail(p + ".annual_volume", "must be positive");
        t.products.push_back(std::move(prod));
      }
    }
  }

  t.calendar.working_days_per_year =
      rd.integer(doc["WORKING_DAYS_PER_YEAR"], "WORKING_DAYS_PER_YEAR");
  if (t.calendar.working_days_per_year <= 0)
    rd.fail("WORKING_DAYS_PER_YEAR", "must be positive");

  {
    const auto& j = doc["STATIONS"];
    if (!j.is_object() || j.empty()) {
      rd.fail("STATIONS", "expected non-empty object");
    } else {
      for (auto it = j.begin(); it != j.end(); ++it) {
        std::string p = "STATIONS." + it.key();
        const auto& sj = it.value();
        if (!sj.is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        Station s;
        s.station_id = it.key();
        s.name = rd.str(sj.value("name", ojson()), p + ".name");
        s.work_center = rd.str(sj.value("work_center", ojson()), p + ".work_center");
        s.cycle_time_min = rd.minute_range(sj.value("cycle_time_range_min", ojson()),
                                           p + ".cycle_time_range_min");
        s.setup_time_min =
            rd.minute_range(sj.value("setup_time_min", ojson()), p + ".setup_time_min");
        s.first_pass_yield = rd.num(sj.value("first_pass_yield", ojson()),
                                    p + ".first_pass_yield");
        if (s.first_pass_yield <= 0.0 || s.first_pass_yield > 1.0)
          rd.fail(p + ".first_pass_yield", "must lie in (0, 1]");
        s.is_quality_gate =
            rd.boolean(sj.value("is_quality_gate", ojson()), p + ".is_quality_gate");
        t.stations.push_back(std::move(s));
      }
    }
  }

  t.station_to_wc = rd.str_map(doc["STATION_TO_WC"], "STATION_TO_WC");

  auto parse_materials = [&](const char* key, bool finished) {
    std::vector<Material> out;
    const auto& j = doc[key];
    if (!j.is_array()) {
      rd.fail(key, "expected array");
      return out;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::string p = std::string(key) + "[" + std::to_string(i) + "]";
      if (!j[i].is_object()) {
        rd.fail(p, "expected object");
        continue;
      }
      Material m;
      m.nid = rd.str(j[i].value("nid", ojson()), p + ".nid");
      m.name = rd.str(j[i].value("name", ojson()), p + ".name");
      m.uom = rd.str(j[i].value("uom", ojson()), p + ".uom");
      if (!finished)
        m.supplier_code = rd.str(j[i].value("supplier_code", ojson()), p + ".supplier_code");
      else
        m.part_number = rd.str(j[i].value("part_number", ojson()), p + ".part_number");
      out.push_back(std::move(m));
    }
    return out;
  };
  t.raw_materials = parse_materials("RAW_MATERIALS", false);
  t.finished_materials = parse_materials("FINISHED_MATERIALS", true);

  t.product_raw_material =
      rd.str_list_map(doc["PRODUCT_RAW_MATERIAL"], "PRODUCT_RAW_MATERIAL");
  t.operation_material_consumption = rd.str_list_map(
      doc["OPERATION_MATERIAL_CONSUMPTION"], "OPERATION_MATERIAL_CONSUMPTION");

  {
    const auto& j = doc["SUPPLIERS"];
    if (!j.is_array()) {
      rd.fail("SUPPLIERS", "expected array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "SUPPLIERS[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        Supplier s;
        s.code = rd.str(j[i].value("code", ojson()), p + ".code");
        s.name = rd.str(j[i].value("name", ojson()), p + ".name");
        s.commodity = rd.str(j[i].value("commodity", ojson()), p + ".commodity");
        t.suppliers.push_back(std::move(s));
      }
    }
  }

  {
    const auto& j = doc["FAILURE_CODES"];
    if (!j.is_array() || j.empty()) {
      rd.fail("FAILURE_CODES", "expected non-empty array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "FAILURE_CODES[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        FailureCode f;
        f.nid = rd.str(j[i].value("nid", ojson()), p + ".nid");
        f.description = rd.str(j[i].value("description", ojson()), p + ".description");
        f.station_id = rd.str(j[i].value("station_id", ojson()), p + ".station_id");
        auto sev = rd.str(j[i].value("severity", ojson()), p + ".severity");
        if (auto s = severity_from_string(sev))
          f.severity = *s;
        else
          rd.fail(p + ".severity", "unknown severity: " + sev);
        t.failure_codes.push_back(std::move(f));
      }
    }
  }

  t.station_failure_codes =
      rd.str_list_map(doc["STATION_FAILURE_CODES"], "STATION_FAILURE_CODES");

  {
    const auto& j = doc["PROCESS_PLANS"];
    if (!j.is_array() || j.empty()) {
      rd.fail("PROCESS_PLANS", "expected non-empty array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "PROCESS_PLANS[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        ProcessPlan pp;
        pp.nid = rd.str(j[i].value("nid", ojson()), p + ".nid");
        pp.part_number = rd.str(j[i].value("part_number", ojson()), p + ".part_number");
        const auto& ops = j[i].value("operations", ojson());
        if (!ops.is_array() || ops.empty()) {
          rd.fail(p + ".operations", "expected non-empty array");
        } else {
          for (std::size_t k = 0; k < ops.size(); ++k) {
            std::string op_p = p + ".operations[" + std::to_string(k) + "]";
            PlanOperation po;
            po.seq = rd.integer(ops[k].value("seq", ojson()), op_p + ".seq");
            po.station_id = rd.str(ops[k].value("station_id", ojson()), op_p + ".station_id");
            po.description = rd.str(ops[k].value("description", ojson()), op_p + ".description");
            pp.operations.push_back(std::move(po));
          }
        }
        t.process_plans.push_back(std::move(pp));
      }
    }
  }

  {
    const auto& j = doc["INSPECTION_PLANS"];
    if (!j.is_array()) {
      rd.fail("INSPECTION_PLANS", "expected array");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "INSPECTION_PLANS[" + std::to_string(i) + "]";
        if (!j[i].is_object()) {
          rd.fail(p, "expected object");
          continue;
        }
        InspectionPlan ip;
        ip.nid = rd.str(j[i].value("nid", ojson()), p + ".nid");
        const auto& chars = j[i].value("characteristics", ojson());
        if (!chars.is_array()) {
          rd.fail(p + ".characteristics", "expected array");
        } else {
          for (std::size_t k = 0; k < chars.size(); ++k) {
            std::string cp = p + ".characteristics[" + std::to_string(k) + "]";
            Characteristic c;
            c.nid = rd.str(chars[k].value("nid", ojson()), cp + ".nid");
            c.name = rd.str(chars[k].value("name", ojson()), cp + ".name");
            c.unit = rd.str(chars[k].value("unit", ojson()), cp + ".unit");
            c.nominal = rd.num(chars[k].value("nominal", ojson()), cp + ".nominal");
            c.lsl = rd.num(chars[k].value("lsl", ojson()), cp + ".lsl");
            c.usl = rd.num(chars[k].value("usl", ojson()), cp + ".usl");
            if (c.lsl >= c.usl) rd.fail(cp, "lsl must be below usl");
            ip.characteristics.push_back(std::move(c));
          }
        }
        t.inspection_plans.push_back(std::move(ip));
      }
    }
  }

  t.station_inspection_plans =
      rd.str_map(doc["STATION_INSPECTION_PLANS"], "STATION_INSPECTION_PLANS");
  t.ncr_dispositions = rd.str_list(doc["NCR_DISPOSITIONS"], "NCR_DISPOSITIONS");
  if (t.ncr_dispositions.empty()) rd.fail("NCR_DISPOSITIONS", "must not be empty");

  {
    const auto& j = doc["NCR_STATUS_DURATIONS"];
    if (!j.is_object()) {
      rd.fail("NCR_STATUS_DURATIONS", "expected object");
    } else {
      t.ncr_status_durations.fresh =
          rd.minute_range(j.value("New", ojson()), "NCR_STATUS_DURATIONS.New");
      t.ncr_status_durations.in_process = rd.minute_range(
          j.value("InProcess", ojson()), "NCR_STATUS_DURATIONS.InProcess");
      t.ncr_status_durations.pending_disposition =
          rd.minute_range(j.value("PendingDisposition", ojson()),
                          "NCR_STATUS_DURATIONS.PendingDisposition");
    }
  }

  t.rates.capa_trigger_rate = rd.num(doc["CAPA_TRIGGER_RATE"], "CAPA_TRIGGER_RATE");
  t.rates.equipment_downtime_prob =
      rd.num(doc["EQUIPMENT_DOWNTIME_PROB"], "EQUIPMENT_DOWNTIME_PROB");
  t.rates.equipment_downtime_duration =
      rd.minute_range(doc["EQUIPMENT_DOWNTIME_DURATION_MIN"],
                      "EQUIPMENT_DOWNTIME_DURATION_MIN");
  t.rates.order_expedite_rate =
      rd.num(doc["ORDER_EXPEDITE_RATE"], "ORDER_EXPEDITE_RATE");
  t.rates.bop_revision_interval_days =
      rd.integer(doc["BOP_REVISION_INTERVAL_DAYS"], "BOP_REVISION_INTERVAL_DAYS");
  t.rates.cycle_time_variance =
      rd.num(doc["CYCLE_TIME_VARIANCE"], "CYCLE_TIME_VARIANCE");
  for (const char* key :
       {"CAPA_TRIGGER_RATE", "EQUIPMENT_DOWNTIME_PROB", "ORDER_EXPEDITE_RATE",
        "CYCLE_TIME_VARIANCE"}) {
    double v = rd.num(doc[key], key);
    if (v < 0.0) rd.fail(key, "must be non-negative");
  }

  {
    const auto& j = doc["DEFAULT_RANDOM_SEED"];
    if (!j.is_number_unsigned() && !j.is_number_integer())
      rd.fail("DEFAULT_RANDOM_SEED", "expected integer");
    else
      t.default_seed = j.get<std::uint64_t>();
  }

  auto parse_named = [&](const char* key, auto& out, auto make) {
    const auto& j = doc[key];
    if (!j.is_array()) {
      rd.fail(key, "expected array");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      std::string p = std::string(key) + "[" + std::to_string(i) + "]";
      if (!j[i].is_object()) {
        rd.fail(p, "expected object");
        continue;
      }
      out.push_back(make(j[i], p));
    }
  };

  parse_named("CERTIFICATIONS", t.certifications, [&](const ojson& j, const std::string& p) {
    Certification c;
    c.nid = rd.str(j.value("nid", ojson()), p + ".nid");
    c.name = rd.str(j.value("name", ojson()), p + ".name");
    return c;
  });
  t.station_certifications =
      rd.str_map(doc["STATION_CERTIFICATIONS"], "STATION_CERTIFICATIONS");

  parse_named("SKILLS", t.skills, [&](const ojson& j, const std::string& p) {
    Skill s;
    s.nid = rd.str(j.value("nid", ojson()), p + ".nid");
    s.name = rd.str(j.value("name", ojson()), p + ".name");
    return s;
  });
  t.station_skills = rd.str_list_map(doc["STATION_SKILLS"], "STATION_SKILLS");

  parse_named("TOOL_DEFINITIONS", t.tool_definitions,
              [&](const ojson& j, const std::string& p) {
                ToolDefinition d;
                d.nid = rd.str(j.value("nid", ojson()), p + ".nid");
                d.name = rd.str(j.value("name", ojson()), p + ".name");
                return d;
              });
  t.station_tools = rd.str_list_map(doc["STATION_TOOLS"], "STATION_TOOLS");

  parse_named("STEP_TEMPLATES", t.step_templates,
              [&](const ojson& j, const std::string& p) {
                StepTemplate s;
                s.nid = rd.str(j.value("nid", ojson()), p + ".nid");
                s.name = rd.str(j.value("name", ojson()), p + ".name");
                s.std_minutes = rd.integer(j.value("std_minutes", ojson()), p + ".std_minutes");
                return s;
              });

  t.rates.change_package_rate =
      rd.num(doc["CHANGE_PACKAGE_RATE"], "CHANGE_PACKAGE_RATE");

  {
    const auto& j = doc["CHANGE_PACKAGE_PARAMS"];
    if (!j.is_object()) {
      rd.fail("CHANGE_PACKAGE_PARAMS", "expected object");
    } else {
      t.change_package_params.types =
          rd.str_list(j.value("types", ojson()), "CHANGE_PACKAGE_PARAMS.types");
      t.change_package_params.approval_dwell_min =
          rd.minute_range(j.value("approval_dwell_min", ojson()),
                          "CHANGE_PACKAGE_PARAMS.approval_dwell_min");
      t.change_package_params.close_dwell_min =
          rd.minute_range(j.value("close_dwell_min", ojson()),
                          "CHANGE_PACKAGE_PARAMS.close_dwell_min");
    }
  }

  {
    const auto& j = doc["BOM_STATION_MATERIALS"];
    if (!j.is_object()) {
      rd.fail("BOM_STATION_MATERIALS", "expected object");
    } else {
      for (auto it = j.begin(); it != j.end(); ++it)
        t.bom_station_materials[it.key()] =
            rd.str_list_map(it.value(), "BOM_STATION_MATERIALS." + it.key());
    }
  }

  // Recognized optional extra; engine defaults cover absence.
  if (doc.contains("DISRUPTION_MTBF_MIN") && doc["DISRUPTION_MTBF_MIN"].is_object()) {
    const auto& j = doc["DISRUPTION_MTBF_MIN"];
    auto read_profile = [&](const char* key, DisruptionProfile& out) {
      if (!j.contains(key)) return;
      std::string p = std::string("DISRUPTION_MTBF_MIN.") + key;
      const auto& pj = j[key];
      if (!pj.is_object()) {
        rd.fail(p, "expected object");
        return;
      }
      out.mtbf_min = rd.num(pj.value("mtbf_min", ojson()), p + ".mtbf_min");
      out.duration_min = rd.minute_range(pj.value("duration_min", ojson()), p + ".duration_min");
    };
    read_profile("supply_delay", t.disruptions.supply_delay);
    read_profile("quality_excursion", t.disruptions.quality_excursion);
    read_profile("operator_shortage", t.disruptions.operator_shortage);
  }

  return res;
}

namespace {

ojson range_json(const Range& r) { return ojson::array({r.lo, r.hi}); }
ojson minute_range_json(const MinuteRange& r) { return ojson::array({r.lo, r.hi}); }

}  // namespace

ojson serialize_template(const DomainTemplate& t) {
  ojson doc = ojson::object();
  doc["PLANT_CODE"] = t.plant_code;
  doc["PLANT_NAME"] = t.plant_name;

  ojson shifts = ojson::array();
  for (const auto& s : t.calendar.shifts)
    shifts.push_back({{"shift_id", s.shift_id},
                      {"name", s.name},
                      {"start_min", s.start_min},
                      {"end_min", s.end_min}});
  doc["SHIFTS"] = std::move(shifts);

  ojson days = ojson::array();
  for (int d : t.calendar.operating_days) days.push_back(kDayNames[d]);
  doc["OPERATING_DAYS"] = std::move(days);

  doc["BREAK_DURATION_MIN"] = t.calendar.break_duration_min;
  doc["WEEKLY_PM_HOURS"] = t.weekly_pm_hours;
  doc["TARGET_OEE_RANGE"] = range_json(t.targets.oee);
  doc["FIRST_PASS_YIELD_RANGE"] = range_json(t.targets.first_pass_yield);
  doc["AVG_WIP_RANGE"] = range_json(t.targets.avg_wip);
  doc["OPERATORS_PER_SHIFT"] = t.targets.operators_per_shift;

  ojson equip = ojson::array();
  for (const auto& n : t.equipment) {
    ojson e = {{"nid", n.nid}, {"name", n.name}, {"level", to_string(n.level)}};
    if (n.parent_nid.empty())
      e["parent_nid"] = nullptr;
    else
      e["parent_nid"] = n.parent_nid;
    equip.push_back(std::move(e));
  }
  doc["EQUIPMENT"] = std::move(equip);

  doc["WORK_CENTER_UNITS"] = t.work_center_units;

  ojson products = ojson::array();
  for (const auto& p : t.products)
    products.push_back({{"part_number", p.part_number},
                        {"name", p.name},
                        {"program_code", p.program_code},
                        {"annual_volume", p.annual_volume}});
  doc["PRODUCTS"] = std::move(products);

  doc["WORKING_DAYS_PER_YEAR"] = t.calendar.working_days_per_year;

  ojson stations = ojson::object();
  for (const auto& s : t.stations)
    stations[s.station_id] = {
        {"name", s.name},
        {"work_center", s.work_center},
        {"cycle_time_range_min", minute_range_json(s.cycle_time_min)},
        {"setup_time_min", minute_range_json(s.setup_time_min)},
        {"first_pass_yield", s.first_pass_yield},
        {"is_quality_gate", s.is_quality_gate}};
  doc["STATIONS"] = std::move(stations);

  doc["STATION_TO_WC"] = t.station_to_wc;

  ojson raw = ojson::array();
  for (const auto& m : t.raw_materials)
    raw.push_back({{"nid", m.nid},
                   {"name", m.name},
                   {"uom", m.uom},
                   {"supplier_code", m.supplier_code}});
  doc["RAW_MATERIALS"] = std::move(raw);

  ojson fin = ojson::array();
  for (const auto& m : t.finished_materials)
    fin.push_back({{"nid", m.nid},
                   {"name", m.name},
                   {"uom", m.uom},
                   {"part_number", m.part_number}});
  doc["FINISHED_MATERIALS"] = std::move(fin);

  doc["PRODUCT_RAW_MATERIAL"] = t.product_raw_material;
  doc["OPERATION_MATERIAL_CONSUMPTION"] = t.operation_material_consumption;

  ojson suppliers = ojson::array();
  for (const auto& s : t.suppliers)
    suppliers.push_back(
        {{"code", s.code}, {"name", s.name}, {"commodity", s.commodity}});
  doc["SUPPLIERS"] = std::move(suppliers);

  ojson codes = ojson::array();
  for (const auto& f : t.failure_codes)
    codes.push_back({{"nid", f.nid},
                     {"description", f.description},
                     {"station_id", f.station_id},
                     {"severity", to_string(f.severity)}});
  doc["FAILURE_CODES"] = std::move(codes);

  doc["STATION_FAILURE_CODES"] = t.station_failure_codes;

  ojson plans = ojson::array();
  for (const auto& p : t.process_plans) {
    ojson ops = ojson::array();
    for (const auto& o : p.operations)
      ops.push_back({{"seq", o.seq},
                     {"station_id", o.station_id},
                     {"description", o.description}});
    plans.push_back({{"nid", p.nid},
                     {"part_number", p.part_number},
                     {"operations", std::move(ops)}});
  }
  doc["PROCESS_PLANS"] = std::move(plans);

  ojson iplans = ojson::array();
  for (const auto& p : t.inspection_plans) {
    ojson chars = ojson::array();
    for (const auto& c : p.characteristics)
      chars.push_back({{"nid", c.nid},
                       {"name", c.name},
                       {"unit", c.unit},
                       {"nominal", c.nominal},
                       {"lsl", c.lsl},
                       {"usl", c.usl}});
    iplans.push_back({{"nid", p.nid}, {"characteristics", std::move(chars)}});
  }
  doc["INSPECTION_PLANS"] = std::move(iplans);

  doc["STATION_INSPECTION_PLANS"] = t.station_inspection_plans;
  doc["NCR_DISPOSITIONS"] = t.ncr_dispositions;
  doc["NCR_STATUS_DURATIONS"] = {
      {"New", minute_range_json(t.ncr_status_durations.fresh)},
      {"InProcess", minute_range_json(t.ncr_status_durations.in_process)},
      {"PendingDisposition",
       minute_range_json(t.ncr_status_durations.pending_disposition)}};
  doc["CAPA_TRIGGER_RATE"] = t.rates.capa_trigger_rate;
  doc["EQUIPMENT_DOWNTIME_PROB"] = t.rates.equipment_downtime_prob;
  doc["EQUIPMENT_DOWNTIME_DURATION_MIN"] =
      minute_range_json(t.rates.equipment_downtime_duration);
  doc["ORDER_EXPEDITE_RATE"] = t.rates.order_expedite_rate;
  doc["BOP_REVISION_INTERVAL_DAYS"] = t.rates.bop_revision_interval_days;
  doc["CYCLE_TIME_VARIANCE"] = t.rates.cycle_time_variance;
  doc["DEFAULT_RANDOM_SEED"] = t.default_seed;

  ojson certs = ojson::array();
  for (const auto& c : t.certifications)
    certs.push_back({{"nid", c.nid}, {"name", c.name}});
  doc["CERTIFICATIONS"] = std::move(certs);
  doc["STATION_CERTIFICATIONS"] = t.station_certifications;

  ojson skills = ojson::array();
  for (const auto& s : t.skills) skills.push_back({{"nid", s.nid}, {"name", s.name}});
  doc["SKILLS"] = std::move(skills);
  doc["STATION_SKILLS"] = t.station_skills;

  ojson tools = ojson::array();
  for (const auto& d : t.tool_definitions)
    tools.push_back({{"nid", d.nid}, {"name", d.name}});
  doc["TOOL_DEFINITIONS"] = std::move(tools);
  doc["STATION_TOOLS"] = t.station_tools;

  ojson steps = ojson::array();
  for (const auto& s : t.step_templates)
    steps.push_back({{"nid", s.nid}, {"name", s.name}, {"std_minutes", s.std_minutes}});
  doc["STEP_TEMPLATES"] = std::move(steps);

  doc["CHANGE_PACKAGE_RATE"] = t.rates.change_package_rate;
  doc["CHANGE_PACKAGE_PARAMS"] = {
      {"types", t.change_package_params.types},
      {"approval_dwell_min", minute_range_json(t.change_package_params.approval_dwell_min)},
      {"close_dwell_min", minute_range_json(t.change_package_params.close_dwell_min)}};

  ojson bom = ojson::object();
  for (const auto& [part, by_station] : t.bom_station_materials) {
    ojson per = ojson::object();
    for (const auto& [station, mats] : by_station) per[station] = mats;
    bom[part] = std::move(per);
  }
  doc["BOM_STATION_MATERIALS"] = std::move(bom);

  doc["DISRUPTION_MTBF_MIN"] = {
      {"supply_delay",
       {{"mtbf_min", t.disruptions.supply_delay.mtbf_min},
        {"duration_min", minute_range_json(t.disruptions.supply_delay.duration_min)}}},
      {"quality_excursion",
       {{"mtbf_min", t.disruptions.quality_excursion.mtbf_min},
        {"duration_min",
         minute_range_json(t.disruptions.quality_excursion.duration_min)}}},
      {"operator_shortage",
       {{"mtbf_min", t.disruptions.operator_shortage.mtbf_min},
        {"duration_min",
         minute_range_json(t.disruptions.operator_shortage.duration_min)}}}};

  return doc;
}

}  // namespace mfgsim::model
