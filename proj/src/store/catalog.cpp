#include "mfgsim/store/catalog.hpp"

#include <algorithm>
#include <cctype>

namespace mfgsim::store {

const ColumnDef* TableDef::find_column(const std::string& n) const {
  for (const auto& c : columns)
    if (c.name == n) return &c;
  return nullptr;
}

const TableDef* TableCatalog::find(const std::string& n) const {
  for (const auto& t : tables)
    if (t.name == n) return &t;
  return nullptr;
}

std::vector<std::string> TableCatalog::names_by_class(TableClass c) const {
  std::vector<std::string> out;
  for (const auto& t : tables)
    if (t.cls == c) out.push_back(t.name);
  return out;
}

namespace {

constexpr bool kOpt = false;  // marks a nullable column

struct Builder {
  TableCatalog cat;

  TableDef& table(std::string name, TableClass cls) {
    TableDef def;
    def.name = std::move(name);
    def.cls = cls;
    cat.tables.push_back(std::move(def));
    return cat.tables.back();
  }
};

void col(TableDef& t, const std::string& name, SemType ty, bool required = true) {
  t.columns.push_back({name, ty, required});
}

void fk(TableDef& t, const std::string& column, const std::string& ref) {
  t.foreign_keys.push_back({column, ref});
}

void pk(TableDef& t, const std::string& name) {
  t.primary_key = name;
  t.columns.insert(t.columns.begin(), ColumnDef{name, SemType::Text, true});
}

void stamps(TableDef& t) {
  col(t, "created_on", SemType::Timestamp);
  col(t, "modified_on", SemType::Timestamp);
}

TableCatalog build() {
  Builder b;

  // ---- mutable, full CDC capture ----
  {
    auto& t = b.table("work_order", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "part_number", SemType::Text);
    col(t, "program_code", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "quantity", SemType::Int);
    col(t, "expedited", SemType::Bool);
    col(t, "due_date", SemType::Timestamp);
    col(t, "current_seq", SemType::Int);
    stamps(t);
    fk(t, "part_number", "product");
  }
  {
    auto& t = b.table("work_order_operation", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "order_nid", SemType::Text);
    col(t, "seq", SemType::Int);
    col(t, "station_id", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "queued_at", SemType::Timestamp);
    col(t, "start_time", SemType::Timestamp, kOpt);
    col(t, "end_time", SemType::Timestamp, kOpt);
    col(t, "setup_minutes", SemType::Int, kOpt);
    col(t, "cycle_minutes", SemType::Int, kOpt);
    col(t, "equipment_nid", SemType::Text, kOpt);
    col(t, "operator_nid", SemType::Text, kOpt);
    stamps(t);
    fk(t, "order_nid", "work_order");
    fk(t, "station_id", "station");
    fk(t, "equipment_nid", "equipment");
    fk(t, "operator_nid", "operator");
  }
  {
    auto& t = b.table("non_conformance", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "operation_nid", SemType::Text);
    col(t, "order_nid", SemType::Text);
    col(t, "station_id", SemType::Text);
    col(t, "failure_code_nid", SemType::Text);
    col(t, "severity", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "disposition", SemType::Text, kOpt);
    col(t, "triggers_capa", SemType::Bool);
    col(t, "state_entered_at", SemType::Timestamp);
    stamps(t);
    fk(t, "operation_nid", "work_order_operation");
    fk(t, "order_nid", "work_order");
    fk(t, "station_id", "station");
    fk(t, "failure_code_nid", "failure_code");
  }
  {
    auto& t = b.table("change_package", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "change_type", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "title", SemType::Text);
    col(t, "part_number", SemType::Text);
    col(t, "station_id", SemType::Text);
    stamps(t);
    fk(t, "part_number", "product");
    fk(t, "station_id", "station");
  }
  {
    auto& t = b.table("quality_action", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "ncr_nid", SemType::Text);
    col(t, "capa_type", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "owner_nid", SemType::Text);
    col(t, "due_date", SemType::Timestamp);
    stamps(t);
    fk(t, "ncr_nid", "non_conformance");
    fk(t, "owner_nid", "operator");
  }
  {
    auto& t = b.table("equipment", TableClass::MutableCdc);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    col(t, "level", SemType::Text);
    col(t, "parent_nid", SemType::Text, kOpt);
    col(t, "status", SemType::Text);
    col(t, "station_id", SemType::Text, kOpt);
    stamps(t);
    fk(t, "parent_nid", "equipment");
    fk(t, "station_id", "station");
  }

  // ---- append-only, INSERT capture ----
  {
    auto& t = b.table("inspection_sample", TableClass::AppendOnlyCdc);
    pk(t, "nid");
    col(t, "operation_nid", SemType::Text);
    col(t, "plan_nid", SemType::Text);
    col(t, "station_id", SemType::Text);
    col(t, "passed", SemType::Bool);
    col(t, "sampled_at", SemType::Timestamp);
    stamps(t);
    fk(t, "operation_nid", "work_order_operation");
    fk(t, "plan_nid", "inspection_plan");
    fk(t, "station_id", "station");
  }
  {
    auto& t = b.table("inspection_value", TableClass::AppendOnlyCdc);
    pk(t, "nid");
    col(t, "sample_nid", SemType::Text);
    col(t, "characteristic_nid", SemType::Text);
    col(t, "measured", SemType::Real);
    col(t, "in_spec", SemType::Bool);
    stamps(t);
    fk(t, "sample_nid", "inspection_sample");
    fk(t, "characteristic_nid", "characteristic");
  }
  {
    auto& t = b.table("actual_consumed_material", TableClass::AppendOnlyCdc);
    pk(t, "nid");
    col(t, "operation_nid", SemType::Text);
    col(t, "material_nid", SemType::Text);
    col(t, "lot_nid", SemType::Text);
    col(t, "quantity", SemType::Real);
    stamps(t);
    fk(t, "operation_nid", "work_order_operation");
    fk(t, "material_nid", "raw_material");
    fk(t, "lot_nid", "material_lot");
  }
  {
    auto& t = b.table("equipment_event", TableClass::AppendOnlyCdc);
    pk(t, "nid");
    col(t, "equipment_nid", SemType::Text);
    col(t, "event_type", SemType::Text);
    col(t, "status", SemType::Text);
    col(t, "duration_min", SemType::Int, kOpt);
    col(t, "note", SemType::Text, kOpt);
    stamps(t);
    fk(t, "equipment_nid", "equipment");
  }
  {
    auto& t = b.table("defect", TableClass::AppendOnlyCdc);
    pk(t, "nid");
    col(t, "ncr_nid", SemType::Text);
    col(t, "failure_code_nid", SemType::Text);
    col(t, "station_id", SemType::Text);
    col(t, "severity", SemType::Text);
    col(t, "quantity", SemType::Int);
    stamps(t);
    fk(t, "ncr_nid", "non_conformance");
    fk(t, "failure_code_nid", "failure_code");
    fk(t, "station_id", "station");
  }

  // ---- seed reference data ----
  {
    auto& t = b.table("site", TableClass::Seed);
    pk(t, "code");
    col(t, "name", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("area", TableClass::Seed);
    pk(t, "nid");
    col(t, "site_code", SemType::Text);
    col(t, "name", SemType::Text);
    stamps(t);
    fk(t, "site_code", "site");
  }
  {
    auto& t = b.table("work_center", TableClass::Seed);
    pk(t, "nid");
    col(t, "area_nid", SemType::Text);
    col(t, "name", SemType::Text);
    stamps(t);
    fk(t, "area_nid", "area");
  }
  {
    auto& t = b.table("station", TableClass::Seed);
    pk(t, "station_id");
    col(t, "name", SemType::Text);
    col(t, "work_center", SemType::Text);
    col(t, "seq", SemType::Int);
    col(t, "cycle_lo", SemType::Int);
    col(t, "cycle_hi", SemType::Int);
    col(t, "setup_lo", SemType::Int);
    col(t, "setup_hi", SemType::Int);
    col(t, "first_pass_yield", SemType::Real);
    col(t, "is_quality_gate", SemType::Bool);
    stamps(t);
    fk(t, "work_center", "work_center");
  }
  {
    auto& t = b.table("product", TableClass::Seed);
    pk(t, "part_number");
    col(t, "name", SemType::Text);
    col(t, "program_code", SemType::Text);
    col(t, "annual_volume", SemType::Int);
    stamps(t);
  }
  {
    auto& t = b.table("process_plan", TableClass::Seed);
    pk(t, "nid");
    col(t, "part_number", SemType::Text);
    col(t, "revision", SemType::Int);
    stamps(t);
    fk(t, "part_number", "product");
  }
  {
    auto& t = b.table("process_plan_operation", TableClass::Seed);
    pk(t, "nid");
    col(t, "plan_nid", SemType::Text);
    col(t, "seq", SemType::Int);
    col(t, "station_id", SemType::Text);
    col(t, "description", SemType::Text);
    stamps(t);
    fk(t, "plan_nid", "process_plan");
    fk(t, "station_id", "station");
  }
  {
    auto& t = b.table("supplier", TableClass::Seed);
    pk(t, "code");
    col(t, "name", SemType::Text);
    col(t, "commodity", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("raw_material", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    col(t, "uom", SemType::Text);
    col(t, "supplier_code", SemType::Text);
    stamps(t);
    fk(t, "supplier_code", "supplier");
  }
  {
    auto& t = b.table("finished_material", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    col(t, "uom", SemType::Text);
    col(t, "part_number", SemType::Text);
    stamps(t);
    fk(t, "part_number", "product");
  }
  {
    auto& t = b.table("material_lot", TableClass::Seed);
    pk(t, "nid");
    col(t, "material_nid", SemType::Text);
    col(t, "supplier_code", SemType::Text);
    col(t, "quantity", SemType::Real);
    col(t, "received_on", SemType::Timestamp);
    stamps(t);
    fk(t, "material_nid", "raw_material");
    fk(t, "supplier_code", "supplier");
  }
  {
    auto& t = b.table("product_material", TableClass::Seed);
    pk(t, "nid");
    col(t, "part_number", SemType::Text);
    col(t, "material_nid", SemType::Text);
    stamps(t);
    fk(t, "part_number", "product");
    fk(t, "material_nid", "raw_material");
  }
  {
    auto& t = b.table("bom_line", TableClass::Seed);
    pk(t, "nid");
    col(t, "part_number", SemType::Text);
    col(t, "station_id", SemType::Text);
    col(t, "material_nid", SemType::Text);
    col(t, "qty_per", SemType::Real);
    stamps(t);
    fk(t, "part_number", "product");
    fk(t, "station_id", "station");
    fk(t, "material_nid", "raw_material");
  }
  {
    auto& t = b.table("shift", TableClass::Seed);
    pk(t, "shift_id");
    col(t, "name", SemType::Text);
    col(t, "start_min", SemType::Int);
    col(t, "end_min", SemType::Int);
    stamps(t);
  }
  {
    auto& t = b.table("operator", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    col(t, "shift_id", SemType::Text);
    stamps(t);
    fk(t, "shift_id", "shift");
  }
  {
    auto& t = b.table("certification", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("skill", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("operator_certification", TableClass::Seed);
    pk(t, "nid");
    col(t, "operator_nid", SemType::Text);
    col(t, "certification_nid", SemType::Text);
    stamps(t);
    fk(t, "operator_nid", "operator");
    fk(t, "certification_nid", "certification");
  }
  {
    auto& t = b.table("operator_skill", TableClass::Seed);
    pk(t, "nid");
    col(t, "operator_nid", SemType::Text);
    col(t, "skill_nid", SemType::Text);
    stamps(t);
    fk(t, "operator_nid", "operator");
    fk(t, "skill_nid", "skill");
  }
  {
    auto& t = b.table("station_certification", TableClass::Seed);
    pk(t, "nid");
    col(t, "station_id", SemType::Text);
    col(t, "certification_nid", SemType::Text);
    stamps(t);
    fk(t, "station_id", "station");
    fk(t, "certification_nid", "certification");
  }
  {
    auto& t = b.table("station_skill", TableClass::Seed);
    pk(t, "nid");
    col(t, "station_id", SemType::Text);
    col(t, "skill_nid", SemType::Text);
    stamps(t);
    fk(t, "station_id", "station");
    fk(t, "skill_nid", "skill");
  }
  {
    auto& t = b.table("tool_definition", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("station_tool", TableClass::Seed);
    pk(t, "nid");
    col(t, "station_id", SemType::Text);
    col(t, "tool_nid", SemType::Text);
    stamps(t);
    fk(t, "station_id", "station");
    fk(t, "tool_nid", "tool_definition");
  }
  {
    auto& t = b.table("step_template", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    col(t, "std_minutes", SemType::Int);
    stamps(t);
  }
  {
    auto& t = b.table("station_step", TableClass::Seed);
    pk(t, "nid");
    col(t, "station_id", SemType::Text);
    col(t, "step_nid", SemType::Text);
    col(t, "seq", SemType::Int);
    stamps(t);
    fk(t, "station_id", "station");
    fk(t, "step_nid", "step_template");
  }
  {
    auto& t = b.table("failure_code", TableClass::Seed);
    pk(t, "nid");
    col(t, "description", SemType::Text);
    col(t, "station_id", SemType::Text);
    col(t, "severity", SemType::Text);
    stamps(t);
    fk(t, "station_id", "station");
  }
  {
    auto& t = b.table("inspection_plan", TableClass::Seed);
    pk(t, "nid");
    col(t, "station_id", SemType::Text);
    stamps(t);
    fk(t, "station_id", "station");
  }
  {
    auto& t = b.table("characteristic", TableClass::Seed);
    pk(t, "nid");
    col(t, "plan_nid", SemType::Text);
    col(t, "name", SemType::Text);
    col(t, "unit", SemType::Text);
    col(t, "nominal", SemType::Real);
    col(t, "lsl", SemType::Real);
    col(t, "usl", SemType::Real);
    stamps(t);
    fk(t, "plan_nid", "inspection_plan");
  }
  {
    auto& t = b.table("ncr_disposition", TableClass::Seed);
    pk(t, "nid");
    col(t, "name", SemType::Text);
    stamps(t);
  }
  {
    auto& t = b.table("calendar_day", TableClass::Seed);
    pk(t, "nid");  // ISO date
    col(t, "weekday", SemType::Int);
    col(t, "is_operating", SemType::Bool);
    stamps(t);
  }
  {
    auto& t = b.table("material_tracking_unit", TableClass::Seed);
    pk(t, "nid");
    col(t, "serial", SemType::Text);
    col(t, "order_nid", SemType::Text);
    col(t, "part_number", SemType::Text);
    stamps(t);
    fk(t, "order_nid", "work_order");
    fk(t, "part_number", "product");
  }
  {
    auto& t = b.table("operation_step", TableClass::Seed);
    pk(t, "nid");
    col(t, "operation_nid", SemType::Text);
    col(t, "step_nid", SemType::Text);
    col(t, "seq", SemType::Int);
    col(t, "std_minutes", SemType::Int);
    stamps(t);
    fk(t, "operation_nid", "work_order_operation");
    fk(t, "step_nid", "step_template");
  }
  {
    auto& t = b.table("daily_wip_snapshot", TableClass::Seed);
    pk(t, "nid");
    col(t, "snapshot_date", SemType::Text);
    col(t, "wip_count", SemType::Int);
    col(t, "on_hold_count", SemType::Int);
    stamps(t);
  }

  return b.cat;
}

}  // namespace

const TableCatalog& catalog() {
  static const TableCatalog cat = build();
  return cat;
}

std::string to_pascal(const std::string& snake) {
  std::string out;
  out.reserve(snake.size());
  bool up = true;
  for (char c : snake) {
    if (c == '_') {
      up = true;
      continue;
    }
    out.push_back(up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    up = false;
  }
  return out;
}

std::string to_snake(const std::string& pascal) {
  std::string out;
  out.reserve(pascal.size() + 4);
  for (std::size_t i = 0; i < pascal.size(); ++i) {
    char c = pascal[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (i > 0) out.push_back('_');
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace mfgsim::store
