#include "mfgsim/util/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfgsim {

namespace {

void ensure_parent(const std::filesystem::path& file) {
  std::filesystem::path dir = file.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

}  // namespace

void write_jsonl(const std::filesystem::path& file, const std::vector<ojson>& rows) {
  ensure_parent(file);
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for write: " + file.string());
  for (const auto& r : rows) out << r.dump() << '\n';
}

std::vector<ojson> read_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open for read: " + file.string());
  std::vector<ojson> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(ojson::parse(line));
  }
  return rows;
}

void write_text_atomic(const std::filesystem::path& file, const std::string& text) {
  ensure_parent(file);
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::string read_text(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open for read: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mfgsim
