#pragma once

#include <string>
#include <vector>

namespace mfgsim::store {

enum class SemType { Bool, Int, Real, Text, Timestamp };

struct ColumnDef {
  std::string name;  // snake_case
  SemType type;
  bool required = true;
};

struct ForeignKey {
  std::string column;
  std::string ref_table;  // always references that table's primary key
};

// Mutable tables get full old/new image capture on every write; append-only
// tables get INSERT capture and reject updates; seed tables are immutable
// reference data outside CDC entirely.
enum class TableClass { MutableCdc, AppendOnlyCdc, Seed };

struct TableDef {
  std::string name;
  std::string primary_key;  // always the first column, type Text
  std::vector<ColumnDef> columns;
  std::vector<ForeignKey> foreign_keys;
  TableClass cls = TableClass::Seed;

  const ColumnDef* find_column(const std::string& name) const;
};

struct TableCatalog {
  std::vector<TableDef> tables;
  const TableDef* find(const std::string& name) const;
  std::vector<std::string> names_by_class(TableClass c) const;
};

// The catalog is template-independent: every template produces the same
// structure, only row contents differ. Built once, shared.
const TableCatalog& catalog();

std::string to_pascal(const std::string& snake);
std::string to_snake(const std::string& pascal);

}  // namespace mfgsim::store
