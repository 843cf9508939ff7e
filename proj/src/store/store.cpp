#include "mfgsim/store/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

namespace mfgsim::store {

bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

ojson value_to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> ojson {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

Value value_from_json(const ojson& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_unsigned()) return static_cast<std::int64_t>(j.get<std::uint64_t>());
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw std::runtime_error("row value must be a scalar, got " + j.dump());
}

const Value* Row::find(const std::string& column) const {
  auto it = values.find(column);
  return it == values.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void missing(const std::string& column) {
  throw std::runtime_error("row has no non-null value for column '" + column + "'");
}

template <class T>
const T& fetch(const Row& row, const std::string& column) {
  const Value* v = row.find(column);
  if (!v || !std::holds_alternative<T>(*v)) missing(column);
  return std::get<T>(*v);
}

}  // namespace

std::string Row::text(const std::string& column) const { return fetch<std::string>(*this, column); }
std::int64_t Row::integer(const std::string& column) const { return fetch<std::int64_t>(*this, column); }
double Row::real(const std::string& column) const {
  const Value* v = find(column);
  if (v && std::holds_alternative<double>(*v)) return std::get<double>(*v);
  if (v && std::holds_alternative<std::int64_t>(*v)) return static_cast<double>(std::get<std::int64_t>(*v));
  missing(column);
}
bool Row::boolean(const std::string& column) const { return fetch<bool>(*this, column); }

std::optional<std::string> Row::text_opt(const std::string& column) const {
  const Value* v = find(column);
  if (!v || is_null(*v)) return std::nullopt;
  return std::get<std::string>(*v);
}

std::optional<std::int64_t> Row::integer_opt(const std::string& column) const {
  const Value* v = find(column);
  if (!v || is_null(*v)) return std::nullopt;
  return std::get<std::int64_t>(*v);
}

std::string to_string(ChangeOp op) {
  switch (op) {
    case ChangeOp::Insert: return "INSERT";
    case ChangeOp::Update: return "UPDATE";
    case ChangeOp::Delete: return "DELETE";
  }
  return "?";
}

namespace {

bool type_ok(SemType type, const Value& v) {
  switch (type) {
    case SemType::Bool: return std::holds_alternative<bool>(v);
    case SemType::Int: return std::holds_alternative<std::int64_t>(v);
    case SemType::Real:
      return std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
    case SemType::Text: return std::holds_alternative<std::string>(v);
    case SemType::Timestamp: return std::holds_alternative<std::int64_t>(v);
  }
  return false;
}

// Store rows are full-width: every catalog column exists in the map, absent
// inputs become explicit nulls. Keeps images, replays, and serialized forms
// structurally identical.
void normalize(const TableDef& def, Row& row) {
  for (const ColumnDef& col : def.columns) row.values.try_emplace(col.name, std::monostate{});
}

const char* type_name(SemType type) {
  switch (type) {
    case SemType::Bool: return "bool";
    case SemType::Int: return "int";
    case SemType::Real: return "real";
    case SemType::Text: return "text";
    case SemType::Timestamp: return "timestamp";
  }
  return "?";
}

// Serializes with every catalog column present (absent -> null) so the byte
// layout of a row depends only on its values, then any opaque extras.
ojson row_doc(const TableDef& def, const Row& row, bool pascal) {
  ojson doc = ojson::object();
  for (const ColumnDef& col : def.columns) {
    const Value* v = row.find(col.name);
    doc[pascal ? to_pascal(col.name) : col.name] = v ? value_to_json(*v) : ojson(nullptr);
  }
  for (const auto& [name, v] : row.values) {
    if (def.find_column(name) == nullptr) {
      doc[pascal ? to_pascal(name) : name] = value_to_json(v);
    }
  }
  return doc;
}

}  // namespace

ojson serialize_row(const TableDef& def, const Row& row, bool pascal) {
  return row_doc(def, row, pascal);
}

Row row_from_json(const ojson& doc) {
  Row row;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    row.values[to_snake(it.key())] = value_from_json(it.value());
  }
  return row;
}

Store::Store() : catalog_(catalog()) {
  for (const TableDef& def : catalog_.tables) tables_.emplace(def.name, TableData{});
}

bool Store::key_exists(const std::string& table, const std::string& key) const {
  auto it = tables_.find(table);
  return it != tables_.end() && it->second.rows.count(key) > 0;
}

void Store::validate_against(
    const TableDef& def, const Row& row,
    const std::unordered_map<std::string, std::vector<const Row*>>& batch_rows) const {
  for (const ColumnDef& col : def.columns) {
    const Value* v = row.find(col.name);
    bool null = !v || is_null(*v);
    if (null) {
      if (col.required) {
        throw StoreError(StoreError::Kind::RequiredFieldNull,
                         def.name + "." + col.name + " is required");
      }
      continue;
    }
    if (!type_ok(col.type, *v)) {
      throw StoreError(StoreError::Kind::TypeMismatch,
                       def.name + "." + col.name + " expects " + type_name(col.type));
    }
  }
  for (const ForeignKey& fk : def.foreign_keys) {
    const Value* v = row.find(fk.column);
    if (!v || is_null(*v)) continue;  // optional reference left blank
    if (!std::holds_alternative<std::string>(*v)) {
      throw StoreError(StoreError::Kind::TypeMismatch,
                       def.name + "." + fk.column + " expects text");
    }
    const std::string& key = std::get<std::string>(*v);
    if (key_exists(fk.ref_table, key)) continue;
    bool in_batch = false;
    auto bit = batch_rows.find(fk.ref_table);
    if (bit != batch_rows.end()) {
      const std::string& ref_pk = catalog_.find(fk.ref_table)->primary_key;
      for (const Row* earlier : bit->second) {
        const Value* pk = earlier->find(ref_pk);
        if (pk && std::holds_alternative<std::string>(*pk) && std::get<std::string>(*pk) == key) {
          in_batch = true;
          break;
        }
      }
    }
    if (!in_batch) {
      throw StoreError(StoreError::Kind::ForeignKeyViolation,
                       def.name + "." + fk.column + " -> " + fk.ref_table + " '" + key +
                           "' does not exist");
    }
  }
}

void Store::insert_batch(const std::vector<PendingRow>& rows, Minutes t) {
  std::unique_lock lock(mu_);

  // Pass 1: validate everything; nothing lands unless the whole batch is good.
  std::vector<Row> stamped;
  stamped.reserve(rows.size());
  std::unordered_map<std::string, std::vector<const Row*>> batch_rows;
  for (const PendingRow& pending : rows) {
    const TableDef* def = catalog_.find(pending.table);
    if (!def) {
      throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + pending.table + "'");
    }
    Row row = pending.row;
    row.values["created_on"] = static_cast<std::int64_t>(t);
    row.values["modified_on"] = static_cast<std::int64_t>(t);
    normalize(*def, row);
    validate_against(*def, row, batch_rows);
    const Value* pk = row.find(def->primary_key);
    const std::string& key = std::get<std::string>(*pk);  // required text, just validated
    if (key_exists(def->name, key)) {
      throw StoreError(StoreError::Kind::DuplicateKey,
                       def->name + " key '" + key + "' already exists");
    }
    auto bit = batch_rows.find(def->name);
    if (bit != batch_rows.end()) {
      for (const Row* earlier : bit->second) {
        if (std::get<std::string>(*earlier->find(def->primary_key)) == key) {
          throw StoreError(StoreError::Kind::DuplicateKey,
                           def->name + " key '" + key + "' repeated in batch");
        }
      }
    }
    stamped.push_back(std::move(row));
    batch_rows[def->name].push_back(&stamped.back());
  }

  // Pass 2: apply, emitting change records for CDC-classed tables.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TableDef* def = catalog_.find(rows[i].table);
    TableData& data = tables_[def->name];
    const std::string key = std::get<std::string>(*stamped[i].find(def->primary_key));
    data.order.push_back(key);
    data.rows.emplace(key, stamped[i]);
    if (def->cls != TableClass::Seed) {
      changelog_.push_back(ChangeRecord{next_seq_++, def->name, ChangeOp::Insert, std::nullopt,
                                        std::move(stamped[i]), t});
    }
  }
}

ChangeRecord Store::update_row(const std::string& table, const std::string& key,
                               const std::map<std::string, Value>& new_values, Minutes t) {
  std::unique_lock lock(mu_);
  const TableDef* def = catalog_.find(table);
  if (!def) throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  if (def->cls != TableClass::MutableCdc) {
    throw StoreError(StoreError::Kind::ImmutableTable, table + " rows cannot be updated");
  }
  TableData& data = tables_[table];
  auto it = data.rows.find(key);
  if (it == data.rows.end()) {
    throw StoreError(StoreError::Kind::NotFound, table + " key '" + key + "' not found");
  }

  Row updated = it->second;
  for (const auto& [name, v] : new_values) {
    const ColumnDef* col = def->find_column(name);
    if (!col) {
      throw StoreError(StoreError::Kind::UnknownColumn, table + " has no column '" + name + "'");
    }
    if (name == def->primary_key || name == "created_on" || name == "modified_on") {
      throw StoreError(StoreError::Kind::UnknownColumn,
                       table + "." + name + " cannot be assigned");
    }
    updated.values[name] = v;
  }
  updated.values["modified_on"] = static_cast<std::int64_t>(t);
  validate_against(*def, updated, {});

  ChangeRecord rec{next_seq_++, table, ChangeOp::Update, it->second, updated, t};
  it->second = std::move(updated);
  changelog_.push_back(rec);
  return rec;
}

ChangeRecord Store::delete_row(const std::string& table, const std::string& key, Minutes t) {
  std::unique_lock lock(mu_);
  const TableDef* def = catalog_.find(table);
  if (!def) throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  if (def->cls != TableClass::MutableCdc) {
    throw StoreError(StoreError::Kind::ImmutableTable, table + " rows cannot be deleted");
  }
  TableData& data = tables_[table];
  auto it = data.rows.find(key);
  if (it == data.rows.end()) {
    throw StoreError(StoreError::Kind::NotFound, table + " key '" + key + "' not found");
  }
  ChangeRecord rec{next_seq_++, table, ChangeOp::Delete, it->second, std::nullopt, t};
  data.rows.erase(it);
  data.order.erase(std::find(data.order.begin(), data.order.end(), key));
  changelog_.push_back(rec);
  return rec;
}

std::optional<Row> Store::get(const std::string& table, const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(table);
  if (it == tables_.end()) {
    throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  }
  auto rit = it->second.rows.find(key);
  if (rit == it->second.rows.end()) return std::nullopt;
  return rit->second;
}

std::vector<Row> Store::scan(const std::string& table) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(table);
  if (it == tables_.end()) {
    throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  }
  std::vector<Row> out;
  out.reserve(it->second.order.size());
  for (const std::string& key : it->second.order) out.push_back(it->second.rows.at(key));
  return out;
}

std::size_t Store::row_count(const std::string& table) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(table);
  if (it == tables_.end()) {
    throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  }
  return it->second.rows.size();
}

std::size_t Store::total_row_count() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, data] : tables_) n += data.rows.size();
  return n;
}

std::uint64_t Store::last_seq() const {
  std::shared_lock lock(mu_);
  return next_seq_ - 1;
}

std::vector<ChangeRecord> Store::changes_since(std::uint64_t seq_exclusive) const {
  std::shared_lock lock(mu_);
  // seq values are contiguous from 1, so the record with seq k sits at k-1.
  if (seq_exclusive >= changelog_.size()) return {};
  return {changelog_.begin() + static_cast<std::ptrdiff_t>(seq_exclusive), changelog_.end()};
}

std::size_t Store::change_count() const {
  std::shared_lock lock(mu_);
  return changelog_.size();
}

void Store::export_events_jsonl(const std::filesystem::path& file) const {
  std::shared_lock lock(mu_);
  std::ostringstream out;
  for (const ChangeRecord& rec : changelog_) {
    const TableDef* def = catalog_.find(rec.table);
    ojson line = ojson::object();
    line["seq"] = rec.seq;
    line["table"] = rec.table;
    line["op"] = to_string(rec.op);
    line["committed_at"] = rec.committed_at;
    line["old"] = rec.old_row ? row_doc(*def, *rec.old_row, false) : ojson(nullptr);
    line["new"] = rec.new_row ? row_doc(*def, *rec.new_row, false) : ojson(nullptr);
    out << line.dump() << '\n';
  }
  write_text_atomic(file, out.str());
}

void Store::export_table(const std::string& table, const std::filesystem::path& file) const {
  std::shared_lock lock(mu_);
  auto it = tables_.find(table);
  if (it == tables_.end()) {
    throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  }
  const TableDef* def = catalog_.find(table);
  std::ostringstream out;
  for (const std::string& key : it->second.order) {
    out << row_doc(*def, it->second.rows.at(key), false).dump() << '\n';
  }
  write_text_atomic(file, out.str());
}

void Store::export_all(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const TableDef& def : catalog_.tables) {
    export_table(def.name, dir / (def.name + ".jsonl"));
  }
}

void Store::import_table(const std::string& table, const std::filesystem::path& file) {
  std::unique_lock lock(mu_);
  const TableDef* def = catalog_.find(table);
  if (!def) throw StoreError(StoreError::Kind::UnknownTable, "unknown table '" + table + "'");
  TableData& data = tables_[table];
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::string text;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    Row row = row_from_json(ojson::parse(text));
    normalize(*def, row);
    for (const ColumnDef& col : def->columns) {
      const Value* v = row.find(col.name);
      bool null = !v || is_null(*v);
      if (null && col.required) {
        throw StoreError(StoreError::Kind::RequiredFieldNull,
                         table + "." + col.name + " is required");
      }
      if (!null && !type_ok(col.type, *v)) {
        throw StoreError(StoreError::Kind::TypeMismatch,
                         table + "." + col.name + " expects " + type_name(col.type));
      }
    }
    const std::string key = std::get<std::string>(*row.find(def->primary_key));
    if (data.rows.count(key)) {
      throw StoreError(StoreError::Kind::DuplicateKey, table + " key '" + key + "' already exists");
    }
    data.order.push_back(key);
    data.rows.emplace(key, std::move(row));
  }
}

}  // namespace mfgsim::store
