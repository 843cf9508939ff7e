#include "mfgsim/sim/lifecycle.hpp"

#include <array>
#include <utility>

namespace mfgsim::sim {

namespace {

using Edge = std::pair<const char*, const char*>;

constexpr std::array<Edge, 5> kWorkOrder = {{{"Edit", "New"},
                                             {"New", "Active"},
                                             {"Active", "Complete"},
                                             {"New", "Aborted"},
                                             {"Active", "Aborted"}}};
constexpr std::array<Edge, 4> kOperation = {{{"New", "Active"},
                                             {"Active", "Complete"},
                                             {"New", "Aborted"},
                                             {"Active", "Aborted"}}};
constexpr std::array<Edge, 3> kNcr = {{{"New", "InProcess"},
                                       {"InProcess", "PendingDisposition"},
                                       {"PendingDisposition", "Closed"}}};
constexpr std::array<Edge, 2> kCapa = {{{"Open", "InProgress"}, {"InProgress", "Closed"}}};
constexpr std::array<Edge, 4> kChange = {{{"Draft", "InReview"},
                                          {"InReview", "Approved"},
                                          {"Approved", "Released"},
                                          {"Released", "Closed"}}};
// availability states: anything up can go down or into maintenance, and
// recovery always lands in RUNNING
constexpr std::array<Edge, 7> kEquipment = {{{"RUNNING", "DOWN"},
                                             {"IDLE", "DOWN"},
                                             {"RUNNING", "PM"},
                                             {"IDLE", "PM"},
                                             {"DOWN", "RUNNING"},
                                             {"PM", "RUNNING"},
                                             {"RUNNING", "IDLE"}}};

template <std::size_t N>
bool has_edge(const std::array<Edge, N>& edges, const std::string& from, const std::string& to) {
  for (const Edge& e : edges) {
    if (from == e.first && to == e.second) return true;
  }
  return false;
}

}  // namespace

bool transition_allowed(const std::string& entity, const std::string& from,
                        const std::string& to) {
  if (entity == "work_order") return has_edge(kWorkOrder, from, to);
  if (entity == "operation") return has_edge(kOperation, from, to);
  if (entity == "ncr") return has_edge(kNcr, from, to);
  if (entity == "capa") return has_edge(kCapa, from, to);
  if (entity == "change_package") return has_edge(kChange, from, to);
  if (entity == "equipment") return has_edge(kEquipment, from, to);
  return false;
}

}  // namespace mfgsim::sim
