#include "mfgsim/sim/seeds.hpp"

#include <cstdio>
#include <map>

#include "mfgsim/sim/calendar.hpp"

namespace mfgsim::sim {

namespace {

using store::PendingRow;
using store::Row;
using store::Value;

Value tx(const std::string& s) { return s; }
Value iv(std::int64_t v) { return v; }
Value rv(double v) { return v; }
Value bv(bool v) { return v; }

std::string pad(const char* prefix, int n, int width = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, n);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> unit_stations(const model::DomainTemplate& t) {
  // work center -> station is the inverse of the injective station -> wc map
  std::map<std::string, std::string> wc_station;
  for (const auto& [station, wc] : t.station_to_wc) wc_station[wc] = station;
  std::vector<std::pair<std::string, std::string>> out;
  for (const model::Station& st : t.stations) {  // template order, not map order
    const std::string& wc = t.station_to_wc.at(st.station_id);
    auto units = t.work_center_units.find(wc);
    if (units == t.work_center_units.end()) continue;
    for (const std::string& unit : units->second) out.emplace_back(unit, st.station_id);
  }
  return out;
}

std::vector<PendingRow> seed_rows(const model::DomainTemplate& t, Minutes start, int days) {
  std::vector<PendingRow> rows;
  auto add = [&rows](const char* table, Row row) { rows.push_back({table, std::move(row)}); };

  add("site", {{{"code", tx(t.plant_code)}, {"name", tx(t.plant_name)}}});

  for (const model::EquipmentNode& n : t.equipment) {
    if (n.level == model::EquipmentLevel::Area) {
      add("area", {{{"nid", tx(n.nid)}, {"site_code", tx(t.plant_code)}, {"name", tx(n.name)}}});
    }
  }
  for (const model::EquipmentNode& n : t.equipment) {
    if (n.level == model::EquipmentLevel::WorkCenter) {
      add("work_center",
          {{{"nid", tx(n.nid)}, {"area_nid", tx(n.parent_nid)}, {"name", tx(n.name)}}});
    }
  }

  for (const model::Station& st : t.stations) {
    add("station", {{{"station_id", tx(st.station_id)},
                     {"name", tx(st.name)},
                     {"work_center", tx(t.station_to_wc.at(st.station_id))},
                     {"seq", iv(static_cast<std::int64_t>(&st - t.stations.data()) + 1)},
                     {"cycle_lo", iv(st.cycle_time_min.lo)},
                     {"cycle_hi", iv(st.cycle_time_min.hi)},
                     {"setup_lo", iv(st.setup_time_min.lo)},
                     {"setup_hi", iv(st.setup_time_min.hi)},
                     {"first_pass_yield", rv(st.first_pass_yield)},
                     {"is_quality_gate", bv(st.is_quality_gate)}}});
  }

  // Every hierarchy node lands in the equipment table; units carry their
  // station, containers do not. Units start RUNNING (available, not busy).
  {
    std::map<std::string, std::string> unit_station;
    for (const auto& [unit, station] : unit_stations(t)) unit_station[unit] = station;
    for (const model::EquipmentNode& n : t.equipment) {
      Row row{{{"nid", tx(n.nid)},
               {"name", tx(n.name)},
               {"level", tx(model::to_string(n.level))},
               {"status", tx("RUNNING")}}};
      if (!n.parent_nid.empty()) row.values["parent_nid"] = tx(n.parent_nid);
      auto it = unit_station.find(n.nid);
      if (it != unit_station.end()) row.values["station_id"] = tx(it->second);
      add("equipment", std::move(row));
    }
  }

  for (const model::Product& p : t.products) {
    add("product", {{{"part_number", tx(p.part_number)},
                     {"name", tx(p.name)},
                     {"program_code", tx(p.program_code)},
                     {"annual_volume", iv(p.annual_volume)}}});
  }

  for (const model::ProcessPlan& plan : t.process_plans) {
    add("process_plan",
        {{{"nid", tx(plan.nid)}, {"part_number", tx(plan.part_number)}, {"revision", iv(1)}}});
    for (const model::PlanOperation& op : plan.operations) {
      char nid[64];
      std::snprintf(nid, sizeof(nid), "%s-%02d", plan.nid.c_str(), op.seq);
      add("process_plan_operation", {{{"nid", tx(nid)},
                                      {"plan_nid", tx(plan.nid)},
                                      {"seq", iv(op.seq)},
                                      {"station_id", tx(op.station_id)},
                                      {"description", tx(op.description)}}});
    }
  }

  for (const model::Supplier& s : t.suppliers) {
    add("supplier",
        {{{"code", tx(s.code)}, {"name", tx(s.name)}, {"commodity", tx(s.commodity)}}});
  }
  for (const model::Material& m : t.raw_materials) {
    add("raw_material", {{{"nid", tx(m.nid)},
                          {"name", tx(m.name)},
                          {"uom", tx(m.uom)},
                          {"supplier_code", tx(m.supplier_code)}}});
  }
  for (const model::Material& m : t.finished_materials) {
    add("finished_material", {{{"nid", tx(m.nid)},
                               {"name", tx(m.name)},
                               {"uom", tx(m.uom)},
                               {"part_number", tx(m.part_number)}}});
  }

  // Ten lots per raw material, received on consecutive days before the run.
  {
    int lot_no = 0;
    for (const model::Material& m : t.raw_materials) {
      for (int k = 0; k < 10; ++k) {
        add("material_lot", {{{"nid", pad("LOT-", ++lot_no)},
                              {"material_nid", tx(m.nid)},
                              {"supplier_code", tx(m.supplier_code)},
                              {"quantity", rv(50.0)},
                              {"received_on", iv(start - (k + 1) * 1440)}}});
      }
    }
  }

  {
    int n = 0;
    for (const model::Product& p : t.products) {
      auto it = t.product_raw_material.find(p.part_number);
      if (it == t.product_raw_material.end()) continue;
      for (const std::string& mat : it->second) {
        add("product_material", {{{"nid", pad("PM-", ++n)},
                                  {"part_number", tx(p.part_number)},
                                  {"material_nid", tx(mat)}}});
      }
    }
  }
  {
    int n = 0;
    for (const model::Product& p : t.products) {
      auto pit = t.bom_station_materials.find(p.part_number);
      if (pit == t.bom_station_materials.end()) continue;
      for (const model::Station& st : t.stations) {
        auto sit = pit->second.find(st.station_id);
        if (sit == pit->second.end()) continue;
        for (const std::string& mat : sit->second) {
          add("bom_line", {{{"nid", pad("BL-", ++n)},
                            {"part_number", tx(p.part_number)},
                            {"station_id", tx(st.station_id)},
                            {"material_nid", tx(mat)},
                            {"qty_per", rv(static_cast<double>(n % 3 + 1))}}});
        }
      }
    }
  }

  for (const model::Shift& s : t.calendar.shifts) {
    add("shift", {{{"shift_id", tx(s.shift_id)},
                   {"name", tx(s.name)},
                   {"start_min", iv(s.start_min)},
                   {"end_min", iv(s.end_min)}}});
  }

  for (const model::Certification& c : t.certifications) {
    add("certification", {{{"nid", tx(c.nid)}, {"name", tx(c.name)}}});
  }
  for (const model::Skill& s : t.skills) {
    add("skill", {{{"nid", tx(s.nid)}, {"name", tx(s.name)}}});
  }

  // One operator per unit per shift. Each carries the certification and the
  // skills of their unit's station.
  {
    auto units = unit_stations(t);
    int opr = 0, oc = 0, os = 0;
    for (const model::Shift& s : t.calendar.shifts) {
      for (const auto& [unit, station] : units) {
        std::string nid = pad("OPR-", ++opr, 3);
        add("operator",
            {{{"nid", tx(nid)}, {"name", "Operator " + nid.substr(4)}, {"shift_id", tx(s.shift_id)}}});
        auto cit = t.station_certifications.find(station);
        if (cit != t.station_certifications.end()) {
          add("operator_certification", {{{"nid", pad("OC-", ++oc)},
                                          {"operator_nid", tx(nid)},
                                          {"certification_nid", tx(cit->second)}}});
        }
        auto sit = t.station_skills.find(station);
        if (sit != t.station_skills.end()) {
          for (const std::string& skill : sit->second) {
            add("operator_skill", {{{"nid", pad("OS-", ++os)},
                                    {"operator_nid", tx(nid)},
                                    {"skill_nid", tx(skill)}}});
          }
        }
      }
    }
  }

  {
    int n = 0;
    for (const model::Station& st : t.stations) {
      auto it = t.station_certifications.find(st.station_id);
      if (it == t.station_certifications.end()) continue;
      add("station_certification", {{{"nid", pad("SC-", ++n, 2)},
                                     {"station_id", tx(st.station_id)},
                                     {"certification_nid", tx(it->second)}}});
    }
  }
  {
    int n = 0;
    for (const model::Station& st : t.stations) {
      auto it = t.station_skills.find(st.station_id);
      if (it == t.station_skills.end()) continue;
      for (const std::string& skill : it->second) {
        add("station_skill", {{{"nid", pad("SS-", ++n, 2)},
                               {"station_id", tx(st.station_id)},
                               {"skill_nid", tx(skill)}}});
      }
    }
  }

  for (const model::ToolDefinition& td : t.tool_definitions) {
    add("tool_definition", {{{"nid", tx(td.nid)}, {"name", tx(td.name)}}});
  }
  {
    int n = 0;
    for (const model::Station& st : t.stations) {
      auto it = t.station_tools.find(st.station_id);
      if (it == t.station_tools.end()) continue;
      for (const std::string& tool : it->second) {
        add("station_tool", {{{"nid", pad("TL-", ++n, 2)},
                              {"station_id", tx(st.station_id)},
                              {"tool_nid", tx(tool)}}});
      }
    }
  }

  for (const model::StepTemplate& st : t.step_templates) {
    add("step_template",
        {{{"nid", tx(st.nid)}, {"name", tx(st.name)}, {"std_minutes", iv(st.std_minutes)}}});
  }
  // every station runs the same generic step sequence
  {
    int n = 0;
    for (const model::Station& st : t.stations) {
      int seq = 0;
      for (const model::StepTemplate& step : t.step_templates) {
        add("station_step", {{{"nid", pad("SP-", ++n, 3)},
                              {"station_id", tx(st.station_id)},
                              {"step_nid", tx(step.nid)},
                              {"seq", iv(++seq)}}});
      }
    }
  }

  for (const model::FailureCode& fc : t.failure_codes) {
    add("failure_code", {{{"nid", tx(fc.nid)},
                          {"description", tx(fc.description)},
                          {"station_id", tx(fc.station_id)},
                          {"severity", tx(model::to_string(fc.severity))}}});
  }

  {
    // plans are keyed by station through the station -> plan map
    std::map<std::string, std::string> plan_station;
    for (const auto& [station, plan] : t.station_inspection_plans) {
      plan_station.emplace(plan, station);
    }
    for (const model::InspectionPlan& plan : t.inspection_plans) {
      add("inspection_plan",
          {{{"nid", tx(plan.nid)}, {"station_id", tx(plan_station.at(plan.nid))}}});
      for (const model::Characteristic& ch : plan.characteristics) {
        add("characteristic", {{{"nid", tx(ch.nid)},
                                {"plan_nid", tx(plan.nid)},
                                {"name", tx(ch.name)},
                                {"unit", tx(ch.unit)},
                                {"nominal", rv(ch.nominal)},
                                {"lsl", rv(ch.lsl)},
                                {"usl", rv(ch.usl)}}});
      }
    }
  }

  for (const std::string& d : t.ncr_dispositions) {
    std::string name = d;
    for (char& c : name) {
      if (c == '_') c = ' ';
    }
    add("ncr_disposition", {{{"nid", tx(d)}, {"name", tx(name)}}});
  }

  {
    WorkCalendar cal(t.calendar);
    for (int d = 0; d <= days; ++d) {
      Minutes m = start + static_cast<Minutes>(d) * 1440;
      add("calendar_day", {{{"nid", tx(to_iso(m).substr(0, 10))},
                            {"weekday", iv(weekday(m))},
                            {"is_operating", bv(cal.is_operating_weekday(weekday(m)))}}});
    }
  }

  return rows;
}

}  // namespace mfgsim::sim
