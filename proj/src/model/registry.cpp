#include "mfgsim/model/registry.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

namespace mfgsim::model {

namespace lifecycle {

const std::vector<std::string>& work_order_statuses() {
  static const std::vector<std::string> v = {"Edit", "New", "Active", "Complete",
                                             "Aborted"};
  return v;
}

const std::vector<std::string>& operation_statuses() {
  static const std::vector<std::string> v = {"New", "Active", "Complete",
                                             "Aborted"};
  return v;
}

const std::vector<std::string>& ncr_statuses() {
  static const std::vector<std::string> v = {"New", "InProcess",
                                             "PendingDisposition", "Closed"};
  return v;
}

const std::vector<std::string>& capa_types() {
  static const std::vector<std::string> v = {"CORRECTIVE", "PREVENTIVE"};
  return v;
}

const std::vector<std::string>& capa_statuses() {
  static const std::vector<std::string> v = {"Open", "InProgress", "Closed"};
  return v;
}

const std::vector<std::string>& change_types() {
  static const std::vector<std::string> v = {"PROCESS", "DESIGN", "DOCUMENT"};
  return v;
}

const std::vector<std::string>& change_statuses() {
  static const std::vector<std::string> v = {"Draft", "InReview", "Approved",
                                             "Released", "Closed"};
  return v;
}

const std::vector<std::string>& equipment_statuses() {
  static const std::vector<std::string> v = {"RUNNING", "IDLE", "DOWN", "PM"};
  return v;
}

}  // namespace lifecycle

VocabularyProjection vocabulary_projection(const DomainTemplate& t,
                                           std::uint64_t version) {
  VocabularyProjection p;
  p.version = version;
  p.template_id = t.template_id;
  for (const auto& s : t.stations) {
    p.stations.push_back({s.station_id, s.name});
    p.work_centers.push_back(s.work_center);
  }
  for (const auto& prod : t.products) {
    p.products.push_back({prod.part_number, prod.name});
    if (std::find(p.program_codes.begin(), p.program_codes.end(),
                  prod.program_code) == p.program_codes.end())
      p.program_codes.push_back(prod.program_code);
  }
  for (const auto& f : t.failure_codes) p.failure_codes.push_back({f.nid, f.description});
  for (const auto& e : t.equipment) p.equipment.push_back({e.nid, e.name});
  for (const auto& s : t.suppliers) p.suppliers.push_back({s.code, s.name});
  for (const auto& ip : t.inspection_plans)
    for (const auto& c : ip.characteristics)
      p.characteristics.push_back({c.nid, c.name});
  for (const auto& sh : t.calendar.shifts) p.shifts.push_back(sh.shift_id);
  p.ncr_statuses = lifecycle::ncr_statuses();
  p.ncr_dispositions = t.ncr_dispositions;
  p.severities = {"MINOR", "MAJOR", "CRITICAL"};
  p.capa_types = lifecycle::capa_types();
  p.capa_statuses = lifecycle::capa_statuses();
  p.change_types = t.change_package_params.types.empty()
                       ? lifecycle::change_types()
                       : t.change_package_params.types;
  p.change_statuses = lifecycle::change_statuses();
  p.work_order_statuses = lifecycle::work_order_statuses();
  return p;
}

TemplateRegistry::TemplateRegistry(std::filesystem::path templates_dir)
    : dir_(std::move(templates_dir)) {}

void TemplateRegistry::register_document(const std::string& template_id,
                                         std::string json_text) {
  std::unique_lock lk(mu_);
  registered_[template_id] = std::move(json_text);
}

std::string TemplateRegistry::document_text(const std::string& template_id) const {
  auto it = registered_.find(template_id);
  if (it != registered_.end()) return it->second;
  if (!dir_.empty()) {
    auto path = dir_ / (template_id + ".json");
    std::ifstream in(path);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }
  }
  throw UnknownTemplate(template_id);
}

void TemplateRegistry::load(const std::string& template_id) {
  std::unique_lock lk(mu_);
  std::string text = document_text(template_id);
  ParseResult parsed = parse_template(text, template_id);
  if (!parsed.ok()) throw MissingExports(parsed.error);
  ValidationReport report = validate_relations(parsed.value);
  if (!report.ok()) throw RelationalViolations(report);

  active_ = std::make_shared<const DomainTemplate>(std::move(parsed.value));
  active_id_ = template_id;
  ++version_;

  // Notify inside the lock: a subscriber that re-reads sees the new template,
  // and no reader can observe the swap before its caches are invalidated.
  for (const auto& [token, fn] : subscribers_) fn(active_id_, version_);
}

std::shared_ptr<const DomainTemplate> TemplateRegistry::active() const {
  std::shared_lock lk(mu_);
  if (!active_) throw std::logic_error("no template loaded");
  return active_;
}

std::string TemplateRegistry::active_id() const {
  std::shared_lock lk(mu_);
  return active_id_;
}

std::uint64_t TemplateRegistry::version() const {
  std::shared_lock lk(mu_);
  return version_;
}

VocabularyProjection TemplateRegistry::projection() const {
  std::shared_lock lk(mu_);
  if (!active_) throw std::logic_error("no template loaded");
  return vocabulary_projection(*active_, version_);
}

std::size_t TemplateRegistry::subscribe(Subscriber fn) {
  std::unique_lock lk(mu_);
  std::size_t token = next_token_++;
  subscribers_.emplace(token, std::move(fn));
  return token;
}

void TemplateRegistry::unsubscribe(std::size_t token) {
  std::unique_lock lk(mu_);
  subscribers_.erase(token);
}

}  // namespace mfgsim::model
