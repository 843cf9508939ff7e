#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mfgsim/store/catalog.hpp"
#include "mfgsim/util/jsonl.hpp"
#include "mfgsim/util/sim_time.hpp"

namespace mfgsim::store {

// Null is monostate. Timestamps are simulation minutes stored as Int.
using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

bool is_null(const Value& v);
ojson value_to_json(const Value& v);
Value value_from_json(const ojson& j);

struct Row {
  std::map<std::string, Value> values;

  const Value* find(const std::string& column) const;
  std::string text(const std::string& column) const;          // throws if absent/null
  std::int64_t integer(const std::string& column) const;
  double real(const std::string& column) const;
  bool boolean(const std::string& column) const;
  std::optional<std::string> text_opt(const std::string& column) const;
  std::optional<std::int64_t> integer_opt(const std::string& column) const;

  bool operator==(const Row&) const = default;
};

enum class ChangeOp { Insert, Update, Delete };
std::string to_string(ChangeOp op);

struct ChangeRecord {
  std::uint64_t seq = 0;  // global, strictly increasing across tables
  std::string table;
  ChangeOp op = ChangeOp::Insert;
  std::optional<Row> old_row;
  std::optional<Row> new_row;
  Minutes committed_at = 0;
};

struct StoreError : std::runtime_error {
  enum class Kind {
    UnknownTable,
    UnknownColumn,
    TypeMismatch,
    RequiredFieldNull,
    DuplicateKey,
    ForeignKeyViolation,
    ImmutableTable,
    NotFound,
  };
  StoreError(Kind k, std::string message)
      : std::runtime_error(std::move(message)), kind(k) {}
  Kind kind;
};

struct PendingRow {
  std::string table;
  Row row;
};

// In-memory relational store. Single writer (the engine), any number of
// readers; reads return copies so no reference outlives the lock.
class Store {
 public:
  Store();

  // Whole-batch validation before any row lands: foreign keys may reference
  // existing rows or rows earlier in the same batch. Stamps created_on and
  // modified_on with t. CDC-classed tables get one INSERT record per row.
  void insert_batch(const std::vector<PendingRow>& rows, Minutes t);

  // Mutable tables only. Emits an UPDATE record with full old/new images,
  // even when new_values changes nothing.
  ChangeRecord update_row(const std::string& table, const std::string& key,
                          const std::map<std::string, Value>& new_values,
                          Minutes t);

  ChangeRecord delete_row(const std::string& table, const std::string& key,
                          Minutes t);

  std::optional<Row> get(const std::string& table, const std::string& key) const;
  std::vector<Row> scan(const std::string& table) const;  // insertion order
  std::size_t row_count(const std::string& table) const;
  std::size_t total_row_count() const;

  std::uint64_t last_seq() const;
  std::vector<ChangeRecord> changes_since(std::uint64_t seq_exclusive) const;
  std::size_t change_count() const;

  // Canonical event stream: one line per ChangeRecord, snake_case, fixed
  // field order. This is the determinism artifact.
  void export_events_jsonl(const std::filesystem::path& file) const;

  // Line-delimited snapshot per table: one snake_case JSON object per row,
  // catalog column order, insertion order.
  void export_table(const std::string& table, const std::filesystem::path& file) const;
  void export_all(const std::filesystem::path& dir) const;

  // Loads a snapshot written by export_table. Timestamps come from the file,
  // nothing is re-stamped and no change records are emitted; the file is
  // trusted to be internally consistent, so foreign keys are not re-checked.
  void import_table(const std::string& table, const std::filesystem::path& file);

 private:
  struct TableData {
    std::vector<std::string> order;  // primary keys in insertion order
    std::unordered_map<std::string, Row> rows;
  };

  void validate_against(const TableDef& def, const Row& row,
                        const std::unordered_map<std::string, std::vector<const Row*>>& batch_rows) const;
  bool key_exists(const std::string& table, const std::string& key) const;

  const TableCatalog& catalog_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, TableData> tables_;
  std::vector<ChangeRecord> changelog_;
  std::uint64_t next_seq_ = 1;
};

// Re-cases every key of a serialized row document; values untouched.
ojson serialize_row(const TableDef& def, const Row& row, bool pascal);
Row row_from_json(const ojson& doc);

}  // namespace mfgsim::store
