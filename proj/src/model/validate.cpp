#include "mfgsim/model/validate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace mfgsim::model {

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::SigmaInjectivity: return "sigma-injectivity";
    case ViolationKind::PhiSurjectivity: return "phi-surjectivity";
    case ViolationKind::RoutingIntegrity: return "routing-integrity";
    case ViolationKind::Containment: return "containment";
    case ViolationKind::ReferenceIntegrity: return "reference-integrity";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream ss;
  for (const auto& v : violations)
    ss << '[' << to_string(v.kind) << "] " << v.message << '\n';
  return ss.str();
}

namespace {

int level_rank(EquipmentLevel l) {
  switch (l) {
    case EquipmentLevel::Site: return 0;
    case EquipmentLevel::Area: return 1;
    case EquipmentLevel::WorkCenter: return 2;
    case EquipmentLevel::Unit: return 3;
    case EquipmentLevel::Instrument: return 4;
  }
  return -1;
}

}  // namespace

ValidationReport validate_relations(const DomainTemplate& t) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::string msg) {
    report.violations.push_back({k, std::move(msg)});
  };

  std::set<std::string> station_ids;
  for (const auto& s : t.stations) station_ids.insert(s.station_id);

  // sigma: station -> work center, must be injective and total.
  {
    std::map<std::string, std::vector<std::string>> by_wc;
    for (const auto& s : t.stations) {
      by_wc[s.work_center].push_back(s.station_id);
      auto it = t.station_to_wc.find(s.station_id);
      if (it == t.station_to_wc.end())
        add(ViolationKind::ReferenceIntegrity,
            "STATION_TO_WC has no entry for station " + s.station_id);
      else if (it->second != s.work_center)
        add(ViolationKind::ReferenceIntegrity,
            "STATION_TO_WC maps " + s.station_id + " to " + it->second +
                " but STATIONS declares " + s.work_center);
    }
    for (const auto& [sid, wc] : t.station_to_wc)
      if (!station_ids.count(sid))
        add(ViolationKind::ReferenceIntegrity,
            "STATION_TO_WC names unknown station " + sid);
    for (const auto& [wc, sids] : by_wc) {
      if (sids.size() > 1) {
        std::string msg = "work center " + wc + " is shared by stations";
        for (const auto& sid : sids) msg += ' ' + sid;
        add(ViolationKind::SigmaInjectivity, msg);
      }
    }
  }

  // Equipment forest: ids unique, parents resolve one level up, Site is root.
  std::map<std::string, const EquipmentNode*> equip;
  for (const auto& n : t.equipment) {
    if (!equip.emplace(n.nid, &n).second)
      add(ViolationKind::ReferenceIntegrity, "duplicate equipment nid " + n.nid);
  }
  for (const auto& n : t.equipment) {
    if (n.level == EquipmentLevel::Site) {
      if (!n.parent_nid.empty())
        add(ViolationKind::Containment,
            "site node " + n.nid + " must not have a parent");
      continue;
    }
    if (n.parent_nid.empty()) {
      add(ViolationKind::Containment,
          to_string(n.level) + " node " + n.nid + " has no parent");
      continue;
    }
    auto it = equip.find(n.parent_nid);
    if (it == equip.end()) {
      add(ViolationKind::Containment,
          "node " + n.nid + " has unknown parent " + n.parent_nid);
      continue;
    }
    if (level_rank(it->second->level) != level_rank(n.level) - 1)
      add(ViolationKind::Containment,
          "node " + n.nid + " (" + to_string(n.level) + ") has parent " +
              n.parent_nid + " of level " + to_string(it->second->level));
  }

  // WORK_CENTER_UNITS entries must name real nodes of the right level.
  std::map<std::string, int> units_per_wc;
  for (const auto& [wc, units] : t.work_center_units) {
    auto wit = equip.find(wc);
    if (wit == equip.end() || wit->second->level != EquipmentLevel::WorkCenter)
      add(ViolationKind::ReferenceIntegrity,
          "WORK_CENTER_UNITS key " + wc + " is not a WorkCenter equipment node");
    for (const auto& u : units) {
      auto uit = equip.find(u);
      if (uit == equip.end() || uit->second->level != EquipmentLevel::Unit) {
        add(ViolationKind::ReferenceIntegrity,
            "WORK_CENTER_UNITS lists " + u + " under " + wc +
                " but it is not a Unit equipment node");
        continue;
      }
      if (uit->second->parent_nid != wc)
        add(ViolationKind::ReferenceIntegrity,
            "unit " + u + " is listed under " + wc + " but its parent is " +
                uit->second->parent_nid);
      ++units_per_wc[wc];
    }
  }

  // Routing: every product has a plan, every plan station exists and its
  // work center has at least one unit to run on.
  std::set<std::string> part_numbers;
  for (const auto& p : t.products) part_numbers.insert(p.part_number);
  std::set<std::string> planned_parts;
  for (const auto& plan : t.process_plans) {
    if (!part_numbers.count(plan.part_number))
      add(ViolationKind::RoutingIntegrity,
          "process plan " + plan.nid + " routes unknown part " + plan.part_number);
    else
      planned_parts.insert(plan.part_number);
    if (plan.operations.empty())
      add(ViolationKind::RoutingIntegrity, "process plan " + plan.nid + " is empty");
    int last_seq = 0;
    for (const auto& op : plan.operations) {
      if (op.seq <= last_seq)
        add(ViolationKind::RoutingIntegrity,
            "process plan " + plan.nid + " operation sequence is not increasing at seq " +
                std::to_string(op.seq));
      last_seq = op.seq;
      const Station* st = t.find_station(op.station_id);
      if (st == nullptr) {
        add(ViolationKind::RoutingIntegrity,
            "process plan " + plan.nid + " references unknown station " + op.station_id);
        continue;
      }
      auto it = units_per_wc.find(st->work_center);
      if (it == units_per_wc.end() || it->second == 0)
        add(ViolationKind::RoutingIntegrity,
            "station " + op.station_id + " maps to work center " + st->work_center +
                " which has no Unit equipment");
    }
  }
  for (const auto& pn : part_numbers)
    if (!planned_parts.count(pn))
      add(ViolationKind::RoutingIntegrity, "product " + pn + " has no process plan");

  // phi: failure codes are station-scoped; every quality gate needs one.
  std::set<std::string> fc_nids;
  std::map<std::string, int> codes_per_station;
  for (const auto& f : t.failure_codes) {
    if (!fc_nids.insert(f.nid).second)
      add(ViolationKind::ReferenceIntegrity, "duplicate failure code nid " + f.nid);
    if (!station_ids.count(f.station_id))
      add(ViolationKind::PhiSurjectivity,
          "failure code " + f.nid + " names unknown station " + f.station_id);
    else
      ++codes_per_station[f.station_id];
  }
  for (const auto& s : t.stations)
    if (s.is_quality_gate && codes_per_station[s.station_id] == 0)
      add(ViolationKind::PhiSurjectivity,
          "quality gate " + s.station_id + " has no failure codes");
  for (const auto& [sid, nids] : t.station_failure_codes) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_FAILURE_CODES names unknown station " + sid);
    for (const auto& nid : nids)
      if (!fc_nids.count(nid))
        add(ViolationKind::ReferenceIntegrity,
            "STATION_FAILURE_CODES lists unknown code " + nid + " for " + sid);
  }

  // Inspection plans: quality gates sample characteristics every cycle.
  std::set<std::string> ip_nids;
  for (const auto& ip : t.inspection_plans) {
    if (!ip_nids.insert(ip.nid).second)
      add(ViolationKind::ReferenceIntegrity, "duplicate inspection plan nid " + ip.nid);
    if (ip.characteristics.empty())
      add(ViolationKind::ReferenceIntegrity,
          "inspection plan " + ip.nid + " has no characteristics");
  }
  for (const auto& [sid, ipn] : t.station_inspection_plans) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_INSPECTION_PLANS names unknown station " + sid);
    if (!ip_nids.count(ipn))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_INSPECTION_PLANS maps " + sid + " to unknown plan " + ipn);
  }
  for (const auto& s : t.stations)
    if (s.is_quality_gate && !t.station_inspection_plans.count(s.station_id))
      add(ViolationKind::ReferenceIntegrity,
          "quality gate " + s.station_id + " has no inspection plan");

  // Material catalogs and their cross-references.
  std::set<std::string> supplier_codes;
  for (const auto& s : t.suppliers)
    if (!supplier_codes.insert(s.code).second)
      add(ViolationKind::ReferenceIntegrity, "duplicate supplier code " + s.code);
  std::set<std::string> raw_nids;
  for (const auto& m : t.raw_materials) {
    if (!raw_nids.insert(m.nid).second)
      add(ViolationKind::ReferenceIntegrity, "duplicate raw material nid " + m.nid);
    if (!supplier_codes.count(m.supplier_code))
      add(ViolationKind::ReferenceIntegrity,
          "raw material " + m.nid + " names unknown supplier " + m.supplier_code);
  }
  std::set<std::string> finished_parts;
  for (const auto& m : t.finished_materials) {
    if (!part_numbers.count(m.part_number))
      add(ViolationKind::ReferenceIntegrity,
          "finished material " + m.nid + " names unknown part " + m.part_number);
    else if (!finished_parts.insert(m.part_number).second)
      add(ViolationKind::ReferenceIntegrity,
          "part " + m.part_number + " has multiple finished materials");
  }
  for (const auto& pn : part_numbers)
    if (!finished_parts.count(pn))
      add(ViolationKind::ReferenceIntegrity,
          "product " + pn + " has no finished material");

  for (const auto& [pn, mats] : t.product_raw_material) {
    if (!part_numbers.count(pn))
      add(ViolationKind::ReferenceIntegrity,
          "PRODUCT_RAW_MATERIAL names unknown part " + pn);
    if (mats.empty())
      add(ViolationKind::ReferenceIntegrity,
          "PRODUCT_RAW_MATERIAL entry for " + pn + " is empty");
    for (const auto& m : mats)
      if (!raw_nids.count(m))
        add(ViolationKind::ReferenceIntegrity,
            "PRODUCT_RAW_MATERIAL lists unknown material " + m + " for " + pn);
  }
  for (const auto& pn : part_numbers)
    if (!t.product_raw_material.count(pn))
      add(ViolationKind::ReferenceIntegrity,
          "product " + pn + " has no raw material list");

  for (const auto& [sid, mats] : t.operation_material_consumption) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "OPERATION_MATERIAL_CONSUMPTION names unknown station " + sid);
    for (const auto& m : mats)
      if (!raw_nids.count(m))
        add(ViolationKind::ReferenceIntegrity,
            "OPERATION_MATERIAL_CONSUMPTION lists unknown material " + m + " for " + sid);
  }

  for (const auto& [pn, by_station] : t.bom_station_materials) {
    if (!part_numbers.count(pn)) {
      add(ViolationKind::ReferenceIntegrity,
          "BOM_STATION_MATERIALS names unknown part " + pn);
      continue;
    }
    const ProcessPlan* plan = t.plan_for(pn);
    for (const auto& [sid, mats] : by_station) {
      if (!station_ids.count(sid)) {
        add(ViolationKind::ReferenceIntegrity,
            "BOM_STATION_MATERIALS names unknown station " + sid + " for " + pn);
        continue;
      }
      if (plan != nullptr) {
        bool routed = false;
        for (const auto& op : plan->operations)
          if (op.station_id == sid) routed = true;
        if (!routed)
          add(ViolationKind::RoutingIntegrity,
              "BOM_STATION_MATERIALS assigns " + sid + " to " + pn +
                  " but the routing skips that station");
      }
      for (const auto& m : mats) {
        if (!raw_nids.count(m))
          add(ViolationKind::ReferenceIntegrity,
              "BOM_STATION_MATERIALS lists unknown material " + m + " for " + pn);
        else {
          auto it = t.product_raw_material.find(pn);
          bool declared = it != t.product_raw_material.end() &&
                          std::find(it->second.begin(), it->second.end(), m) !=
                              it->second.end();
          if (!declared)
            add(ViolationKind::ReferenceIntegrity,
                "BOM_STATION_MATERIALS consumes " + m + " for " + pn +
                    " which PRODUCT_RAW_MATERIAL does not declare");
        }
      }
    }
  }

  // Workforce and tooling maps resolve against their catalogs.
  std::set<std::string> cert_nids, skill_nids, tool_nids;
  for (const auto& c : t.certifications) cert_nids.insert(c.nid);
  for (const auto& s : t.skills) skill_nids.insert(s.nid);
  for (const auto& d : t.tool_definitions) tool_nids.insert(d.nid);
  for (const auto& [sid, cert] : t.station_certifications) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_CERTIFICATIONS names unknown station " + sid);
    if (!cert_nids.count(cert))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_CERTIFICATIONS maps " + sid + " to unknown certification " + cert);
  }
  for (const auto& [sid, skills] : t.station_skills) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_SKILLS names unknown station " + sid);
    for (const auto& sk : skills)
      if (!skill_nids.count(sk))
        add(ViolationKind::ReferenceIntegrity,
            "STATION_SKILLS lists unknown skill " + sk + " for " + sid);
  }
  for (const auto& [sid, tools] : t.station_tools) {
    if (!station_ids.count(sid))
      add(ViolationKind::ReferenceIntegrity,
          "STATION_TOOLS names unknown station " + sid);
    for (const auto& tdef : tools)
      if (!tool_nids.count(tdef))
        add(ViolationKind::ReferenceIntegrity,
            "STATION_TOOLS lists unknown tool " + tdef + " for " + sid);
  }

  return report;
}

}  // namespace mfgsim::model
