#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfgsim/exp/stats.hpp"
#include "mfgsim/model/registry.hpp"
#include "mfgsim/sim/engine.hpp"
#include "mfgsim/util/jsonl.hpp"

namespace mfgsim::exp {

// One run reduced to the three calibrated KPIs plus per-station yield detail.
struct KpiObservation {
  double first_pass_yield = 0.0;
  double daily_throughput = 0.0;
  double ncr_rate = 0.0;
  bool ncr_rate_defined = false;  // false when nothing completed
  std::map<std::string, double> station_fpy;  // gates with at least one sample
};

KpiObservation extract_kpis(const sim::RunSummary& s);

struct TargetBand {
  double lo = 0.0;
  double hi = 0.0;
};

// Yield band comes straight from the template. The other two are derived:
// throughput is the quota rate +- half an order (daily emission is always
// floor or ceil of the rate), NCR rate is the yield band reflected around
// zero defects.
struct KpiTargets {
  TargetBand first_pass_yield;
  TargetBand daily_throughput;
  TargetBand ncr_rate;
};

KpiTargets derive_targets(const model::DomainTemplate& t);

struct CalibrationCell {
  std::string template_id;
  std::string kpi;  // first_pass_yield | daily_throughput | ncr_rate
  TargetBand target;
  bool targets_apply = true;         // false under the stress profile
  std::vector<double> observations;  // seed order; undefined runs skipped
  stats::MeanCi ci;
  bool strictly_within = false;  // both CI endpoints strictly inside target
  bool insufficient_n = false;   // fewer than two usable observations
};

struct RunFailure {
  std::string template_id;
  std::uint64_t seed = 0;  // 0 when the template itself failed to load
  std::string what;
};

struct StationYield {
  std::string station_id;
  double configured = 0.0;
  double mean_observed = 0.0;  // across seeds
};

struct CalibrationConfig {
  std::vector<std::string> template_ids;
  std::vector<std::uint64_t> seeds;
  int days = 30;
  bool stressful = false;
  Minutes start = sim::canonical_start();
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CalibrationReport {
  CalibrationConfig config;
  std::vector<CalibrationCell> cells;  // template-major, fixed KPI order
  std::map<std::string, std::vector<StationYield>> station_yield;
  std::vector<RunFailure> failures;

  // Every cell's interval strictly inside its band, nothing degenerate,
  // nothing failed. Only meaningful for the stable profile.
  bool all_within() const;

  std::string render_text() const;
  ojson to_json() const;
};

// Runs |templates| x |seeds| simulations (cells in parallel, results in
// deterministic order) and reduces each (template, KPI) to a 95% t-interval.
// The registry is left on the last loadable template in the list.
CalibrationReport run_calibration(model::TemplateRegistry& registry,
                                  const CalibrationConfig& cfg);

}  // namespace mfgsim::exp
