#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfgsim/store/store.hpp"
#include "mfgsim/util/jsonl.hpp"

namespace mfgsim::lake {

struct LakeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One committed snapshot of one table. The file list is cumulative (the full
// read view as of this snapshot), so expiring ancestors never breaks a
// retained snapshot's read.
struct Snapshot {
  std::uint64_t id = 0;
  std::uint64_t parent_id = 0;  // 0 = none
  std::uint64_t committed_cycle = 0;
  std::vector<std::string> files;     // relative to the table directory
  std::int64_t new_rows = 0;          // rows added by this snapshot
  Minutes max_created_on = 0;         // high water over the whole view
  std::uint64_t max_seq = 0;          // mutable tables: changelog high water
};

// Directory-per-table lakehouse: immutable data files plus one manifest per
// snapshot; a snapshot exists once its manifest has been atomically renamed
// into place. Layout:
//   <root>/<table>/data-<snapshot>.rows
//   <root>/<table>/snapshots/<snapshot>.manifest
class Lake {
 public:
  explicit Lake(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::vector<std::string> tables() const;  // directories with >= 1 snapshot
  std::vector<Snapshot> snapshots(const std::string& table) const;  // id order
  std::optional<Snapshot> latest(const std::string& table) const;

  // Latest view. Append-only tables return every row; mutable tables return
  // the last committed version per primary key, tombstones dropped.
  // Bookkeeping columns (leading underscore) are stripped.
  std::vector<store::Row> read(const std::string& table) const;
  std::vector<store::Row> read_at(const std::string& table, std::uint64_t snapshot_id) const;

  // Removes snapshots beyond the newest `keep`, then deletes data files no
  // surviving manifest references. Returns the number of snapshots removed.
  int expire_snapshots(const std::string& table, int keep = 10);

  // --- used by the sync process ---
  std::filesystem::path table_dir(const std::string& table) const;
  void write_data_file(const std::string& table, const std::string& file_name,
                       const std::vector<ojson>& lines) const;
  void commit_snapshot(const std::string& table, const Snapshot& s) const;

 private:
  std::vector<store::Row> read_files(const std::string& table,
                                     const Snapshot& s,
                                     bool latest_per_key) const;

  std::filesystem::path root_;
};

// Serialization used by both sync and tests.
ojson snapshot_to_json(const std::string& table, const Snapshot& s);
Snapshot snapshot_from_json(const ojson& doc);

}  // namespace mfgsim::lake
