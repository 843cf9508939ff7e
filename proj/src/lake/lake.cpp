#include "mfgsim/lake/lake.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace mfgsim::lake {

namespace fs = std::filesystem;

namespace {

std::string manifest_name(std::uint64_t id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06llu.manifest", static_cast<unsigned long long>(id));
  return buf;
}

}  // namespace

ojson snapshot_to_json(const std::string& table, const Snapshot& s) {
  ojson doc;
  doc["table"] = table;
  doc["snapshot_id"] = s.id;
  doc["parent_id"] = s.parent_id;
  doc["committed_cycle"] = s.committed_cycle;
  doc["files"] = s.files;
  doc["new_rows"] = s.new_rows;
  doc["max_created_on"] = s.max_created_on;
  doc["max_seq"] = s.max_seq;
  return doc;
}

Snapshot snapshot_from_json(const ojson& doc) {
  Snapshot s;
  s.id = doc.at("snapshot_id").get<std::uint64_t>();
  s.parent_id = doc.at("parent_id").get<std::uint64_t>();
  s.committed_cycle = doc.at("committed_cycle").get<std::uint64_t>();
  s.files = doc.at("files").get<std::vector<std::string>>();
  s.new_rows = doc.at("new_rows").get<std::int64_t>();
  s.max_created_on = doc.at("max_created_on").get<Minutes>();
  s.max_seq = doc.at("max_seq").get<std::uint64_t>();
  return s;
}

Lake::Lake(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

fs::path Lake::table_dir(const std::string& table) const { return root_ / table; }

std::vector<std::string> Lake::tables() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_directory()) continue;
    fs::path snaps = entry.path() / "snapshots";
    if (!fs::is_directory(snaps)) continue;
    for (const auto& m : fs::directory_iterator(snaps))
      if (m.path().extension() == ".manifest") {
        out.push_back(entry.path().filename().string());
        break;
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Snapshot> Lake::snapshots(const std::string& table) const {
  std::vector<Snapshot> out;
  fs::path dir = table_dir(table) / "snapshots";
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".manifest") continue;
    auto lines = read_jsonl(entry.path());
    if (lines.size() != 1) throw LakeError("malformed manifest: " + entry.path().string());
    out.push_back(snapshot_from_json(lines[0]));
  }
  std::sort(out.begin(), out.end(),
            [](const Snapshot& a, const Snapshot& b) { return a.id < b.id; });
  return out;
}

std::optional<Snapshot> Lake::latest(const std::string& table) const {
  auto all = snapshots(table);
  if (all.empty()) return std::nullopt;
  return all.back();
}

void Lake::write_data_file(const std::string& table, const std::string& file_name,
                           const std::vector<ojson>& lines) const {
  fs::create_directories(table_dir(table));
  write_jsonl(table_dir(table) / file_name, lines);
}

void Lake::commit_snapshot(const std::string& table, const Snapshot& s) const {
  fs::path dir = table_dir(table) / "snapshots";
  fs::create_directories(dir);
  fs::path tmp = dir / ("." + manifest_name(s.id) + ".tmp");
  write_jsonl(tmp, {snapshot_to_json(table, s)});
  // The rename is the commit: readers either see the whole snapshot or none.
  fs::rename(tmp, dir / manifest_name(s.id));
}

std::vector<store::Row> Lake::read_files(const std::string& table, const Snapshot& s,
                                         bool latest_per_key) const {
  struct Version {
    std::uint64_t seq = 0;
    bool deleted = false;
    store::Row row;
  };
  std::map<std::string, Version> by_key;
  std::string key_column;
  std::uint64_t ordinal = 0;  // file order stands in for seq when absent

  for (const auto& file : s.files) {
    for (const auto& line : read_jsonl(table_dir(table) / file)) {
      if (line.contains("_schema")) {
        key_column = line["_schema"].at("key").get<std::string>();
        continue;
      }
      ++ordinal;
      Version v;
      v.seq = line.contains("_seq") ? line["_seq"].get<std::uint64_t>() : ordinal;
      v.deleted = line.contains("_op") && line["_op"].get<std::string>() == "DELETE";
      ojson clean = line;
      clean.erase("_seq");
      clean.erase("_op");
      v.row = store::row_from_json(clean);
      if (key_column.empty()) throw LakeError("data file missing schema header");
      std::string key = v.row.text(key_column);
      auto it = by_key.find(key);
      if (it == by_key.end() || it->second.seq <= v.seq) by_key[key] = std::move(v);
    }
  }
  (void)latest_per_key;  // unique keys make this the identity for append-only
  std::vector<store::Row> out;
  out.reserve(by_key.size());
  for (auto& [key, v] : by_key)
    if (!v.deleted) out.push_back(std::move(v.row));
  return out;
}

std::vector<store::Row> Lake::read(const std::string& table) const {
  auto snap = latest(table);
  if (!snap) return {};
  return read_files(table, *snap, true);
}

std::vector<store::Row> Lake::read_at(const std::string& table,
                                      std::uint64_t snapshot_id) const {
  for (const auto& s : snapshots(table))
    if (s.id == snapshot_id) return read_files(table, s, true);
  throw LakeError("no such snapshot: " + table + "/" + std::to_string(snapshot_id));
}

int Lake::expire_snapshots(const std::string& table, int keep) {
  auto all = snapshots(table);
  if (static_cast<int>(all.size()) <= keep) return 0;
  std::size_t victims = all.size() - static_cast<std::size_t>(keep);
  std::set<std::string> referenced;
  for (std::size_t i = victims; i < all.size(); ++i)
    referenced.insert(all[i].files.begin(), all[i].files.end());
  for (std::size_t i = 0; i < victims; ++i)
    fs::remove(table_dir(table) / "snapshots" / manifest_name(all[i].id));
  for (const auto& entry : fs::directory_iterator(table_dir(table))) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind("data-", 0) == 0 && !referenced.count(name)) fs::remove(entry.path());
  }
  return static_cast<int>(victims);
}

}  // namespace mfgsim::lake
