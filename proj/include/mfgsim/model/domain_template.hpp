#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfgsim::model {

// One parsed template is the single source of truth for the simulator, the
// star schema and the tool layer. Everything they agree on (station ids,
// failure codes, part numbers, ...) is defined here and nowhere else.

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Range&) const = default;
};

// Integer minutes, inclusive on both ends.
struct MinuteRange {
  int lo = 0;
  int hi = 0;
  bool operator==(const MinuteRange&) const = default;
};

enum class Severity { Minor, Major, Critical };
std::string to_string(Severity s);
std::optional<Severity> severity_from_string(const std::string& s);

enum class EquipmentLevel { Site, Area, WorkCenter, Unit, Instrument };
std::string to_string(EquipmentLevel l);
std::optional<EquipmentLevel> equipment_level_from_string(const std::string& s);

struct Shift {
  std::string shift_id;
  std::string name;
  int start_min = 0;  // minute of day; end < start means the shift wraps midnight
  int end_min = 0;
  bool operator==(const Shift&) const = default;
};

struct EquipmentNode {
  std::string nid;
  std::string name;
  EquipmentLevel level = EquipmentLevel::Unit;
  std::string parent_nid;  // empty only for the site root
  bool operator==(const EquipmentNode&) const = default;
};

struct Station {
  std::string station_id;
  std::string name;
  std::string work_center;
  MinuteRange cycle_time_min;
  MinuteRange setup_time_min;
  double first_pass_yield = 1.0;
  bool is_quality_gate = false;
  bool operator==(const Station&) const = default;
};

struct Product {
  std::string part_number;
  std::string name;
  std::string program_code;
  int annual_volume = 0;
  bool operator==(const Product&) const = default;
};

struct FailureCode {
  std::string nid;
  std::string description;
  std::string station_id;
  Severity severity = Severity::Minor;
  bool operator==(const FailureCode&) const = default;
};

struct Supplier {
  std::string code;
  std::string name;
  std::string commodity;
  bool operator==(const Supplier&) const = default;
};

struct Material {
  std::string nid;
  std::string name;
  std::string uom;
  std::string supplier_code;  // empty for finished materials
  std::string part_number;    // set for finished materials
  bool operator==(const Material&) const = default;
};

struct Certification {
  std::string nid;
  std::string name;
  bool operator==(const Certification&) const = default;
};

struct Skill {
  std::string nid;
  std::string name;
  bool operator==(const Skill&) const = default;
};

struct ToolDefinition {
  std::string nid;
  std::string name;
  bool operator==(const ToolDefinition&) const = default;
};

struct StepTemplate {
  std::string nid;
  std::string name;
  int std_minutes = 0;
  bool operator==(const StepTemplate&) const = default;
};

struct Characteristic {
  std::string nid;
  std::string name;
  std::string unit;
  double nominal = 0.0;
  double lsl = 0.0;
  double usl = 0.0;
  bool operator==(const Characteristic&) const = default;
};

struct InspectionPlan {
  std::string nid;
  std::vector<Characteristic> characteristics;
  bool operator==(const InspectionPlan&) const = default;
};

struct PlanOperation {
  int seq = 0;
  std::string station_id;
  std::string description;
  bool operator==(const PlanOperation&) const = default;
};

struct ProcessPlan {
  std::string nid;
  std::string part_number;
  std::vector<PlanOperation> operations;
  bool operator==(const ProcessPlan&) const = default;
};

struct NcrStatusDurations {
  MinuteRange fresh;                // dwell in "New"
  MinuteRange in_process;           // dwell in "InProcess"
  MinuteRange pending_disposition;  // dwell in "PendingDisposition"
  bool operator==(const NcrStatusDurations&) const = default;
};

struct ChangePackageParams {
  std::vector<std::string> types;
  MinuteRange approval_dwell_min;
  MinuteRange close_dwell_min;
  bool operator==(const ChangePackageParams&) const = default;
};

struct DisruptionProfile {
  double mtbf_min = 0.0;  // working minutes between firings
  MinuteRange duration_min;
  bool operator==(const DisruptionProfile&) const = default;
};

// Optional template extras for the disruption kinds that have no dedicated
// export; engine defaults apply when a template omits them.
struct DisruptionDefaults {
  DisruptionProfile supply_delay{1440.0, {60, 180}};
  DisruptionProfile quality_excursion{2880.0, {120, 240}};
  DisruptionProfile operator_shortage{2880.0, {120, 480}};
  bool operator==(const DisruptionDefaults&) const = default;
};

struct TargetRanges {
  Range oee;
  Range first_pass_yield;
  Range avg_wip;
  int operators_per_shift = 0;
  bool operator==(const TargetRanges&) const = default;
};

struct Calendar {
  std::vector<Shift> shifts;
  std::vector<int> operating_days;  // 0 = Monday ... 6 = Sunday
  int break_duration_min = 0;
  int working_days_per_year = 0;
  bool operator==(const Calendar&) const = default;
};

struct Rates {
  double capa_trigger_rate = 0.0;
  double equipment_downtime_prob = 0.0;  // per unit per working hour
  MinuteRange equipment_downtime_duration;
  double order_expedite_rate = 0.0;  // expected expedites per day
  int bop_revision_interval_days = 0;
  double cycle_time_variance = 0.0;
  double change_package_rate = 0.0;  // packages per working day
  bool operator==(const Rates&) const = default;
};

struct DomainTemplate {
  std::string template_id;  // file stem, not an export

  std::string plant_code;
  std::string plant_name;
  Calendar calendar;
  double weekly_pm_hours = 0.0;
  TargetRanges targets;

  std::vector<EquipmentNode> equipment;
  std::map<std::string, std::vector<std::string>> work_center_units;
  std::vector<Product> products;
  std::vector<Station> stations;  // file order defines station sequence
  std::map<std::string, std::string> station_to_wc;

  std::vector<Material> raw_materials;
  std::vector<Material> finished_materials;
  std::map<std::string, std::vector<std::string>> product_raw_material;
  std::map<std::string, std::vector<std::string>> operation_material_consumption;
  std::vector<Supplier> suppliers;

  std::vector<FailureCode> failure_codes;
  std::map<std::string, std::vector<std::string>> station_failure_codes;

  std::vector<ProcessPlan> process_plans;
  std::vector<InspectionPlan> inspection_plans;
  std::map<std::string, std::string> station_inspection_plans;

  std::vector<std::string> ncr_dispositions;
  NcrStatusDurations ncr_status_durations;

  std::vector<Certification> certifications;
  std::map<std::string, std::string> station_certifications;
  std::vector<Skill> skills;
  std::map<std::string, std::vector<std::string>> station_skills;
  std::vector<ToolDefinition> tool_definitions;
  std::map<std::string, std::vector<std::string>> station_tools;
  std::vector<StepTemplate> step_templates;

  ChangePackageParams change_package_params;
  std::map<std::string, std::map<std::string, std::vector<std::string>>>
      bom_station_materials;  // part_number -> station -> materials

  Rates rates;
  std::uint64_t default_seed = 0;
  DisruptionDefaults disruptions;

  bool operator==(const DomainTemplate&) const = default;

  const Station* find_station(const std::string& station_id) const;
  const Product* find_product(const std::string& part_number) const;
  const ProcessPlan* plan_for(const std::string& part_number) const;
  const InspectionPlan* find_inspection_plan(const std::string& nid) const;
};

// The 45 export names, in canonical file order.
const std::vector<std::string>& export_names();

}  // namespace mfgsim::model
