#pragma once

#include <string>
#include <vector>

#include "mfgsim/model/domain_template.hpp"
#include "mfgsim/util/jsonl.hpp"

namespace mfgsim::model {

struct FieldError {
  std::string path;  // e.g. "STATIONS.S1.cycle_time_range_min"
  std::string message;
};

// Parse failures fall in two classes: absent exports and malformed fields.
// Both lists are complete, not first-error-only.
struct ParseError {
  std::vector<std::string> missing_exports;
  std::vector<FieldError> field_errors;
  bool ok() const { return missing_exports.empty() && field_errors.empty(); }
  std::string summary() const;
};

struct ParseResult {
  DomainTemplate value;
  ParseError error;
  bool ok() const { return error.ok(); }
};

ParseResult parse_template(const std::string& json_text, const std::string& template_id);

// Canonical serialization: the 45 exports in canonical order, snake_case keys,
// ranges as two-element arrays. parse(serialize(t)) == t for any valid t.
ojson serialize_template(const DomainTemplate& t);

}  // namespace mfgsim::model
