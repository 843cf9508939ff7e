#pragma once

#include <vector>

#include "mfgsim/model/domain_template.hpp"
#include "mfgsim/store/store.hpp"

namespace mfgsim::sim {

// Reference data present before the first tick: plant structure, routing,
// materials and lots, workforce, quality definitions, and the calendar for
// the run window. A pure function of its inputs — no randomness — so two
// runs over the same template start from identical stores.
std::vector<store::PendingRow> seed_rows(const model::DomainTemplate& t, Minutes start, int days);

// Operators are tied one-to-one to equipment units; this resolves the unit's
// station (via its work center) so certifications and skills line up.
std::vector<std::pair<std::string, std::string>> unit_stations(const model::DomainTemplate& t);

}  // namespace mfgsim::sim
