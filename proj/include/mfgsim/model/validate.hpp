#pragma once

#include <string>
#include <vector>

#include "mfgsim/model/domain_template.hpp"

namespace mfgsim::model {

enum class ViolationKind {
  SigmaInjectivity,    // two stations share a work center
  PhiSurjectivity,     // quality gate without a failure code, or code with unknown station
  RoutingIntegrity,    // routing references unknown station or unit-less work center
  Containment,         // equipment forest breaks the level hierarchy
  ReferenceIntegrity,  // catalog cross-reference does not resolve
};

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;
};

// Violations are report entries, not faults: validation always runs to the
// end and enumerates everything it finds.
struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_relations(const DomainTemplate& t);

}  // namespace mfgsim::model
