#include "mfgsim/lake/sync.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <optional>

#include "mfgsim/store/catalog.hpp"

namespace mfgsim::lake {

namespace {

std::string data_file_name(std::uint64_t snapshot_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "data-%06llu.rows",
                static_cast<unsigned long long>(snapshot_id));
  return buf;
}

ojson schema_header(const store::TableDef& def, bool with_cdc_columns) {
  ojson cols = ojson::array();
  for (const auto& c : def.columns) cols.push_back(c.name);
  if (with_cdc_columns) {
    cols.push_back("_seq");
    cols.push_back("_op");
  }
  ojson doc;
  doc["_schema"] = {{"table", def.name}, {"key", def.primary_key}, {"columns", cols}};
  return doc;
}

}  // namespace

SyncProcess::SyncProcess(const store::Store& store, Lake& lake, bool steal_lock)
    : store_(store), lake_(lake), lock_file_(lake.root() / ".lock") {
  for (int attempt = 0; ; ++attempt) {
    int fd = ::open(lock_file_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
      std::string pid = std::to_string(::getpid()) + "\n";
      (void)!::write(fd, pid.data(), pid.size());
      ::close(fd);
      break;
    }
    if (!steal_lock || attempt > 0)
      throw LakeLocked("lake already locked: " + lock_file_.string());
    std::filesystem::remove(lock_file_);
  }
  recover();
}

SyncProcess::~SyncProcess() { std::filesystem::remove(lock_file_); }

void SyncProcess::recover() {
  const auto& cat = store::catalog();
  for (const auto& name : cat.names_by_class(store::TableClass::MutableCdc)) {
    MutableState st;
    if (auto snap = lake_.latest(name)) st.applied_seq = snap->max_seq;
    mutables_[name] = st;
  }
  for (const auto& name : cat.names_by_class(store::TableClass::AppendOnlyCdc)) {
    AppendState st;
    if (auto snap = lake_.latest(name)) {
      st.high_water = snap->max_created_on;
      st.any = true;
      for (const auto& row : lake_.read(name))
        st.keys.insert(row.text(cat.find(name)->primary_key));
      next_cycle_ = std::max(next_cycle_, snap->committed_cycle + 1);
    }
    appends_[name] = st;
  }
  for (const auto& [name, st] : mutables_)
    if (auto snap = lake_.latest(name))
      next_cycle_ = std::max(next_cycle_, snap->committed_cycle + 1);
}

void SyncProcess::crash_point(const std::string& point) const {
  if (hook_) hook_(point);
}

std::uint64_t SyncProcess::cursor(const std::string& mutable_table) const {
  return mutables_.at(mutable_table).applied_seq;
}

Minutes SyncProcess::watermark(const std::string& append_table) const {
  return appends_.at(append_table).high_water;
}

SyncReport SyncProcess::cycle() {
  auto t0 = std::chrono::steady_clock::now();
  SyncReport report;
  report.cycle_id = next_cycle_;
  crash_point("cycle_start");

  const auto& cat = store::catalog();

  // Changelog drain: collapse the window to one as-of-seq image per changed
  // key, then append those images. Using the record's own image (not a store
  // lookup) keeps the snapshot consistent with its max_seq even while the
  // engine keeps writing.
  std::uint64_t min_cursor = UINT64_MAX;
  for (const auto& [name, st] : mutables_) min_cursor = std::min(min_cursor, st.applied_seq);
  struct Pending {
    std::uint64_t seq = 0;
    std::optional<store::Row> image;  // nullopt = deleted
  };
  std::map<std::string, std::map<std::string, Pending>> drained;
  std::map<std::string, std::uint64_t> drained_max_seq;
  for (const auto& rec : store_.changes_since(min_cursor)) {
    auto it = mutables_.find(rec.table);
    if (it == mutables_.end() || rec.seq <= it->second.applied_seq) continue;
    const std::string& pk_col = cat.find(rec.table)->primary_key;
    const store::Row& keyed = rec.new_row ? *rec.new_row : *rec.old_row;
    Pending p;
    p.seq = rec.seq;
    if (rec.op != store::ChangeOp::Delete) p.image = rec.new_row;
    drained[rec.table][keyed.text(pk_col)] = std::move(p);
    auto& mx = drained_max_seq[rec.table];
    mx = std::max(mx, rec.seq);
  }

  for (const auto& name : cat.names_by_class(store::TableClass::MutableCdc)) {
    auto dit = drained.find(name);
    if (dit == drained.end()) continue;
    const store::TableDef& def = *cat.find(name);
    auto parent = lake_.latest(name);
    Snapshot s;
    s.id = parent ? parent->id + 1 : 1;
    s.parent_id = parent ? parent->id : 0;
    s.committed_cycle = next_cycle_;
    if (parent) s.files = parent->files;
    s.max_created_on = parent ? parent->max_created_on : 0;
    s.max_seq = std::max(mutables_[name].applied_seq, drained_max_seq[name]);

    std::vector<ojson> lines;
    lines.push_back(schema_header(def, true));
    for (const auto& [key, p] : dit->second) {
      ojson line;
      if (p.image) {
        line = store::serialize_row(def, *p.image, false);
        s.max_created_on = std::max(s.max_created_on, p.image->integer("created_on"));
      } else {
        line[def.primary_key] = key;  // tombstone carries only the key
      }
      line["_seq"] = p.seq;
      line["_op"] = p.image ? "UPSERT" : "DELETE";
      lines.push_back(std::move(line));
      ++s.new_rows;
    }
    std::string file = data_file_name(s.id);
    s.files.push_back(file);
    lake_.write_data_file(name, file, lines);
    crash_point("table:" + name + ":data_written");
    crash_point("table:" + name + ":before_commit");
    lake_.commit_snapshot(name, s);
    crash_point("table:" + name + ":after_commit");
    mutables_[name].applied_seq = s.max_seq;
    report.rows_written[name] = s.new_rows;
    ++report.snapshots_committed;
  }

  // Watermark poll: created_on >= high water re-reads the boundary minute on
  // purpose; the committed-key set drops what already landed.
  for (const auto& name : cat.names_by_class(store::TableClass::AppendOnlyCdc)) {
    AppendState& st = appends_[name];
    const store::TableDef& def = *cat.find(name);
    std::vector<store::Row> fresh;
    Minutes seen = st.high_water;
    for (const auto& row : store_.scan(name)) {
      Minutes created = row.integer("created_on");
      if (st.any && created < st.high_water) continue;
      seen = std::max(seen, created);
      if (st.keys.count(row.text(def.primary_key))) {
        ++report.dedup_drops;
        continue;
      }
      fresh.push_back(row);
    }
    if (fresh.empty()) {
      // Nothing new, but everything at or below `seen` is already committed.
      st.high_water = seen;
      continue;
    }
    auto parent = lake_.latest(name);
    Snapshot s;
    s.id = parent ? parent->id + 1 : 1;
    s.parent_id = parent ? parent->id : 0;
    s.committed_cycle = next_cycle_;
    if (parent) s.files = parent->files;
    s.max_created_on = std::max(parent ? parent->max_created_on : 0, seen);
    s.max_seq = 0;
    std::vector<ojson> lines;
    lines.push_back(schema_header(def, false));
    for (const auto& row : fresh) lines.push_back(store::serialize_row(def, row, false));
    s.new_rows = static_cast<std::int64_t>(fresh.size());
    std::string file = data_file_name(s.id);
    s.files.push_back(file);
    lake_.write_data_file(name, file, lines);
    crash_point("table:" + name + ":data_written");
    crash_point("table:" + name + ":before_commit");
    lake_.commit_snapshot(name, s);
    crash_point("table:" + name + ":after_commit");
    st.high_water = s.max_created_on;
    st.any = true;
    for (const auto& row : fresh) st.keys.insert(row.text(def.primary_key));
    report.rows_written[name] = s.new_rows;
    ++report.snapshots_committed;
  }

  crash_point("cycle_end");
  ++next_cycle_;
  report.latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace mfgsim::lake
