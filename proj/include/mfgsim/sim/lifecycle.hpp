#pragma once

#include <stdexcept>
#include <string>

namespace mfgsim::sim {

struct IllegalTransition : std::logic_error {
  IllegalTransition(const std::string& entity, const std::string& from, const std::string& to)
      : std::logic_error(entity + " cannot move " + from + " -> " + to) {}
};

// Entities: "work_order", "operation", "ncr", "capa", "change_package",
// "equipment". Every status write in the engine passes through here first.
bool transition_allowed(const std::string& entity, const std::string& from,
                        const std::string& to);

inline void check_transition(const std::string& entity, const std::string& from,
                             const std::string& to) {
  if (!transition_allowed(entity, from, to)) throw IllegalTransition(entity, from, to);
}

}  // namespace mfgsim::sim
