#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "mfgsim/lake/lake.hpp"
#include "mfgsim/store/store.hpp"

namespace mfgsim::lake {

struct SyncReport {
  std::uint64_t cycle_id = 0;
  std::map<std::string, std::int64_t> rows_written;  // only tables that wrote
  std::int64_t dedup_drops = 0;  // re-read via >= and skipped by primary key
  int snapshots_committed = 0;
  double latency_ms = 0.0;  // wall clock; never lands in a canonical file
};

struct LakeLocked : LakeError {
  using LakeError::LakeError;
};

// Fault injection: called at labeled points inside a cycle; throwing from it
// aborts the cycle exactly where a process death would.
using CrashHook = std::function<void(const std::string& point)>;

// Drains the store's changelog (6 mutable tables, as-of-seq images) and polls
// created_on watermarks (5 append-only tables, >= re-read with primary-key
// dedup). All progress state lives in memory; a fresh process rebuilds it
// from the lake's committed manifests, so every row lands exactly once no
// matter where a previous process died.
class SyncProcess {
 public:
  // Acquires <root>/.lock exclusively; throws LakeLocked when another sync
  // process holds it (steal_lock overrides a stale one). Recovery runs here.
  SyncProcess(const store::Store& store, Lake& lake, bool steal_lock = false);
  ~SyncProcess();

  SyncProcess(const SyncProcess&) = delete;
  SyncProcess& operator=(const SyncProcess&) = delete;

  SyncReport cycle();

  void set_crash_hook(CrashHook hook) { hook_ = std::move(hook); }

  // Recovered or advanced positions, exposed for inspection.
  std::uint64_t cursor(const std::string& mutable_table) const;
  Minutes watermark(const std::string& append_table) const;

 private:
  void recover();
  void crash_point(const std::string& point) const;

  const store::Store& store_;
  Lake& lake_;
  std::filesystem::path lock_file_;
  std::uint64_t next_cycle_ = 1;
  CrashHook hook_;

  struct MutableState {
    std::uint64_t applied_seq = 0;  // changelog records at or below are in the lake
  };
  struct AppendState {
    Minutes high_water = 0;
    bool any = false;                // false until the first committed row
    std::set<std::string> keys;      // committed primary keys
  };
  std::map<std::string, MutableState> mutables_;
  std::map<std::string, AppendState> appends_;
};

}  // namespace mfgsim::lake
