#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfgsim/model/domain_template.hpp"
#include "mfgsim/model/parse.hpp"
#include "mfgsim/model/validate.hpp"

namespace mfgsim::model {

struct UnknownTemplate : std::runtime_error {
  explicit UnknownTemplate(const std::string& id)
      : std::runtime_error("unknown template: " + id) {}
};

struct MissingExports : std::runtime_error {
  explicit MissingExports(const ParseError& err)
      : std::runtime_error("template rejected: " + err.summary()), error(err) {}
  ParseError error;
};

struct RelationalViolations : std::runtime_error {
  explicit RelationalViolations(const ValidationReport& rep)
      : std::runtime_error("template rejected:\n" + rep.summary()), report(rep) {}
  ValidationReport report;
};

// Identifier vocabularies projected from the active template. The simulator
// draws values from these sets and the tool layer constrains parameters to
// them, so they cannot drift apart.
struct VocabEntry {
  std::string id;
  std::string name;
};

struct VocabularyProjection {
  std::uint64_t version = 0;
  std::string template_id;
  std::vector<VocabEntry> stations;
  std::vector<std::string> work_centers;
  std::vector<VocabEntry> products;  // id = part number
  std::vector<std::string> program_codes;
  std::vector<VocabEntry> failure_codes;  // name = description
  std::vector<VocabEntry> equipment;
  std::vector<VocabEntry> suppliers;
  std::vector<VocabEntry> characteristics;
  std::vector<std::string> shifts;
  std::vector<std::string> ncr_statuses;
  std::vector<std::string> ncr_dispositions;
  std::vector<std::string> severities;
  std::vector<std::string> capa_types;
  std::vector<std::string> capa_statuses;
  std::vector<std::string> change_types;
  std::vector<std::string> change_statuses;
  std::vector<std::string> work_order_statuses;
};

VocabularyProjection vocabulary_projection(const DomainTemplate& t,
                                           std::uint64_t version = 0);

// Fixed lifecycle enums shared by the simulator, star schema and tools.
// These are engine semantics, not template content.
namespace lifecycle {
const std::vector<std::string>& work_order_statuses();   // Edit..Aborted
const std::vector<std::string>& operation_statuses();    // New..Aborted
const std::vector<std::string>& ncr_statuses();          // New..Closed
const std::vector<std::string>& capa_types();            // CORRECTIVE, PREVENTIVE
const std::vector<std::string>& capa_statuses();         // Open, InProgress, Closed
const std::vector<std::string>& change_types();          // PROCESS, DESIGN, DOCUMENT
const std::vector<std::string>& change_statuses();       // Draft..Closed
const std::vector<std::string>& equipment_statuses();    // RUNNING, IDLE, DOWN, PM
}  // namespace lifecycle

// Single storage location for the active template. Both the simulator and
// the tool layer resolve reads through here; a successful load swaps the
// template atomically, bumps the version and notifies subscribers so no
// cached copy survives the swap.
class TemplateRegistry {
 public:
  using Subscriber = std::function<void(const std::string& template_id, std::uint64_t version)>;

  TemplateRegistry() = default;
  explicit TemplateRegistry(std::filesystem::path templates_dir);

  // Makes a document loadable without touching the filesystem.
  void register_document(const std::string& template_id, std::string json_text);

  // Parses, validates and swaps in the named template. On any failure the
  // previous template stays active and the version does not move.
  void load(const std::string& template_id);

  std::shared_ptr<const DomainTemplate> active() const;
  std::string active_id() const;
  std::uint64_t version() const;
  VocabularyProjection projection() const;  // computed fresh on every call

  // Subscribers run synchronously inside the swap, before any reader can see
  // the new template. They must mark caches stale and return; calling back
  // into the registry from a subscriber deadlocks.
  std::size_t subscribe(Subscriber fn);
  void unsubscribe(std::size_t token);

 private:
  std::string document_text(const std::string& template_id) const;

  mutable std::shared_mutex mu_;
  std::filesystem::path dir_;
  std::map<std::string, std::string> registered_;
  std::shared_ptr<const DomainTemplate> active_;
  std::string active_id_;
  std::uint64_t version_ = 0;
  std::map<std::size_t, Subscriber> subscribers_;
  std::size_t next_token_ = 1;
};

}  // namespace mfgsim::model
