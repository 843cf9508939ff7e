#include "mfgsim/exp/calibration.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <optional>
#include <thread>

namespace mfgsim::exp {

namespace {

const char* const kKpiNames[] = {"first_pass_yield", "daily_throughput", "ncr_rate"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Throughput reads better with two decimals, rates with five.
const char* kpi_format(const std::string& kpi) {
  return kpi == "daily_throughput" ? "%.2f" : "%.5f";
}

}  // namespace

KpiObservation extract_kpis(const sim::RunSummary& s) {
  KpiObservation k;
  k.first_pass_yield = s.observed_fpy;
  k.daily_throughput = s.throughput_per_day;
  k.ncr_rate = s.ncr_rate;
  k.ncr_rate_defined = s.operations_completed > 0;
  for (const auto& [sid, st] : s.stations) {
    std::int64_t n = st.samples_passed + st.samples_failed;
    if (n > 0) k.station_fpy[sid] = static_cast<double>(st.samples_passed) / n;
  }
  return k;
}

KpiTargets derive_targets(const model::DomainTemplate& t) {
  KpiTargets k;
  k.first_pass_yield = {t.targets.first_pass_yield.lo, t.targets.first_pass_yield.hi};
  double rate = 0.0;
  for (const auto& p : t.products) rate += p.annual_volume;
  rate /= 365.0;
  k.daily_throughput = {rate - 0.5, rate + 0.5};
  k.ncr_rate = {1.0 - t.targets.first_pass_yield.hi, 1.0 - t.targets.first_pass_yield.lo};
  return k;
}

bool CalibrationReport::all_within() const {
  if (cells.empty() || !failures.empty()) return false;
  return std::all_of(cells.begin(), cells.end(), [](const CalibrationCell& c) {
    return c.strictly_within && !c.insufficient_n;
  });
}

std::string CalibrationReport::render_text() const {
  std::string out;
  char head[160];
  std::snprintf(head, sizeof(head),
                "calibration  profile=%s  days=%d  seeds=%zu  templates=%zu\n",
                config.stressful ? "stressful" : "stable", config.days,
                config.seeds.size(), config.template_ids.size());
  out += head;
  out += "template      kpi               target              n   mean      sd        ci95                  within\n";
  for (const auto& c : cells) {
    const char* f = kpi_format(c.kpi);
    std::string target = "[" + fmt(f, c.target.lo) + ", " + fmt(f, c.target.hi) + "]";
    std::string ci = c.ci.defined
                         ? "[" + fmt(f, c.ci.lo) + ", " + fmt(f, c.ci.hi) + "]"
                         : "(n < 2)";
    const char* within = !c.targets_apply ? "n/a"
                         : c.insufficient_n ? "n<2"
                         : c.strictly_within ? "yes"
                                             : "NO";
    char line[256];
    std::snprintf(line, sizeof(line), "%-13s %-17s %-19s %-3zu %-9s %-9s %-21s %s\n",
                  c.template_id.c_str(), c.kpi.c_str(), target.c_str(),
                  c.observations.size(), fmt(f, c.ci.mean).c_str(),
                  fmt(f, c.ci.sd).c_str(), ci.c_str(), within);
    out += line;
  }
  if (!station_yield.empty()) {
    out += "\nstation yield, configured/observed mean\n";
    for (const auto& [tid, rows] : station_yield) {
      out += "  " + tid + ":";
      for (const auto& r : rows)
        out += " " + r.station_id + " " + fmt("%.3f", r.configured) + "/" +
               fmt("%.3f", r.mean_observed);
      out += "\n";
    }
  }
  for (const auto& f : failures) {
    out += "failure: " + f.template_id;
    if (f.seed != 0) out += " seed " + std::to_string(f.seed);
    out += ": " + f.what + "\n";
  }
  return out;
}

ojson CalibrationReport::to_json() const {
  ojson doc;
  doc["profile"] = config.stressful ? "stressful" : "stable";
  doc["days"] = config.days;
  doc["seeds"] = config.seeds;
  doc["templates"] = config.template_ids;
  doc["all_within"] = all_within();
  doc["cells"] = ojson::array();
  for (const auto& c : cells) {
    ojson jc;
    jc["template"] = c.template_id;
    jc["kpi"] = c.kpi;
    jc["target"] = {c.target.lo, c.target.hi};
    jc["targets_apply"] = c.targets_apply;
    jc["observations"] = c.observations;
    jc["n"] = c.ci.n;
    if (c.ci.defined) {
      jc["mean"] = c.ci.mean;
      jc["sd"] = c.ci.sd;
      jc["ci95"] = {c.ci.lo, c.ci.hi};
    }
    jc["strictly_within"] = c.strictly_within;
    jc["insufficient_n"] = c.insufficient_n;
    doc["cells"].push_back(jc);
  }
  doc["station_yield"] = ojson::object();
  for (const auto& [tid, rows] : station_yield) {
    ojson arr = ojson::array();
    for (const auto& r : rows)
      arr.push_back({{"station_id", r.station_id},
                     {"configured", r.configured},
                     {"mean_observed", r.mean_observed}});
    doc["station_yield"][tid] = arr;
  }
  doc["failures"] = ojson::array();
  for (const auto& f : failures)
    doc["failures"].push_back(
        {{"template", f.template_id}, {"seed", f.seed}, {"what", f.what}});
  return doc;
}

CalibrationReport run_calibration(model::TemplateRegistry& registry,
                                  const CalibrationConfig& cfg) {
  CalibrationReport rep;
  rep.config = cfg;

  struct Loaded {
    std::string id;
    std::shared_ptr<const model::DomainTemplate> t;
  };
  std::vector<Loaded> templates;
  for (const auto& id : cfg.template_ids) {
    try {
      registry.load(id);
      templates.push_back({id, registry.active()});
    } catch (const std::exception& e) {
      rep.failures.push_back({id, 0, e.what()});
    }
  }

  struct Job {
    std::size_t ti = 0;
    std::uint64_t seed = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t ti = 0; ti < templates.size(); ++ti)
    for (auto seed : cfg.seeds) jobs.push_back({ti, seed});

  // Each job writes only its own slot, so the reduction below is independent
  // of scheduling order.
  std::vector<std::optional<KpiObservation>> results(jobs.size());
  std::vector<std::optional<RunFailure>> fails(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i; (i = cursor.fetch_add(1)) < jobs.size();) {
      const Job& j = jobs[i];
      try {
        sim::RunConfig rc;
        rc.seed = j.seed;
        rc.days = cfg.days;
        rc.start = cfg.start;
        rc.stressful = cfg.stressful;
        sim::Engine eng(templates[j.ti].t, rc);
        eng.run();
        results[i] = extract_kpis(eng.summary());
      } catch (const std::exception& e) {
        fails[i] = RunFailure{templates[j.ti].id, j.seed, e.what()};
      }
    }
  };
  unsigned n_threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& f : fails)
    if (f) rep.failures.push_back(*f);

  std::size_t per = cfg.seeds.size();
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    const auto& [id, t] = templates[ti];
    KpiTargets targets = derive_targets(*t);
    std::vector<double> fpy, thr, ncr;
    std::map<std::string, std::pair<double, int>> stn;  // sum, count
    for (std::size_t si = 0; si < per; ++si) {
      const auto& obs = results[ti * per + si];
      if (!obs) continue;
      fpy.push_back(obs->first_pass_yield);
      thr.push_back(obs->daily_throughput);
      if (obs->ncr_rate_defined) ncr.push_back(obs->ncr_rate);
      for (const auto& [sid, v] : obs->station_fpy) {
        stn[sid].first += v;
        stn[sid].second += 1;
      }
    }
    const TargetBand* bands[] = {&targets.first_pass_yield,
                                 &targets.daily_throughput, &targets.ncr_rate};
    const std::vector<double>* series[] = {&fpy, &thr, &ncr};
    for (int k = 0; k < 3; ++k) {
      CalibrationCell c;
      c.template_id = id;
      c.kpi = kKpiNames[k];
      c.target = *bands[k];
      c.targets_apply = !cfg.stressful;
      c.observations = *series[k];
      c.ci = stats::t_ci95(c.observations);
      c.insufficient_n = !c.ci.defined;
      c.strictly_within = c.ci.defined && c.target.lo < c.ci.lo && c.ci.hi < c.target.hi;
      rep.cells.push_back(std::move(c));
    }
    std::vector<StationYield> rows;
    for (const auto& s : t->stations) {
      auto it = stn.find(s.station_id);
      if (it == stn.end()) continue;
      rows.push_back({s.station_id, s.first_pass_yield,
                      it->second.first / it->second.second});
    }
    rep.station_yield[id] = std::move(rows);
  }
  return rep;
}

}  // namespace mfgsim::exp
