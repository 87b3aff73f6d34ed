#include "parkassign/metrics.h"

#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "parkassign/io.h"

namespace parkassign {

ReroutingResult rerouting_time(const RunResult& run, const Assignment& optimal,
                               const AssignmentProblem& p) {
  const std::size_t k = run.outcomes.size();
  if (optimal.per_vehicle_cost.size() != k ||
      static_cast<std::size_t>(p.vehicle_count) != k) {
    throw std::invalid_argument(
        "rerouting_time: run and optimal assignment come from different "
        "scenarios");
  }
  ReroutingResult r;
  r.per_vehicle_s.resize(k);
  double sum = 0.0;
  for (std::size_t v = 0; v < k; ++v) {
    const auto& o = run.outcomes[v];
    if (!o.parked()) {
      ++r.abandoned;
      continue;
    }
    const double delta = o.total_time() - optimal.per_vehicle_cost[v];
    r.per_vehicle_s[v] = delta;
    sum += delta;
    ++r.parked;
  }
  r.mean_s = r.parked > 0 ? sum / r.parked : 0.0;
  return r;
}

LotFailures lot_failures(const RunResult& run, const Scenario& s) {
  const std::size_t n = s.lots.size();
  LotFailures f;
  f.failed_by_last_lot.assign(n, 0);
  f.unused_by_lot.assign(n, 0);
  for (const auto& o : run.outcomes) {
    if (o.parked()) continue;
    ++f.total_failed;
    if (o.lot >= 0) ++f.failed_by_last_lot[o.lot];
  }
  for (std::size_t i = 0; i < n; ++i) {
    f.unused_by_lot[i] = s.lots[i].capacity - run.final_lots[i].occupied;
    f.total_unused += f.unused_by_lot[i];
  }
  return f;
}

FailureReport failed_search_report(const std::vector<const RunResult*>& runs,
                                   const Scenario& s) {
  FailureReport report;
  const std::size_t n = s.lots.size();
  report.failed_by_last_lot.assign(n, 0);
  report.unused_by_lot.assign(n, 0);
  for (const RunResult* run : runs) {
    LotFailures f = lot_failures(*run, s);
    for (std::size_t i = 0; i < n; ++i) {
      report.failed_by_last_lot[i] += f.failed_by_last_lot[i];
      report.unused_by_lot[i] += f.unused_by_lot[i];
    }
    report.per_replication.push_back(std::move(f));
  }
  return report;
}

MetricsReport build_report(const Scenario& s,
                           const std::vector<Replication>& reps) {
  MetricsReport report;
  for (const auto& lot : s.lots) report.lot_ids.push_back(lot.id);
  report.replications = static_cast<int>(reps.size());

  std::vector<const RunResult*> runs;
  for (const auto& rep : reps) {
    runs.push_back(&rep.run);
    const auto rr = rerouting_time(rep.run, rep.optimal, rep.problem);
    for (std::size_t v = 0; v < rr.per_vehicle_s.size(); ++v) {
      report.vehicles.push_back({rep.index, static_cast<int>(v),
                                 rep.profiles[v].group, rr.per_vehicle_s[v],
                                 rep.run.outcomes[v].kind});
    }
    report.abandoned_total += rr.abandoned;
    report.parked_total += rr.parked;
  }
  FailureReport failures = failed_search_report(runs, s);
  report.failed_by_last_lot = std::move(failures.failed_by_last_lot);
  report.unused_by_lot = std::move(failures.unused_by_lot);
  report.per_replication_failures = std::move(failures.per_replication);
  report.convergence = convergence_series(reps);
  if (!report.convergence.empty()) {
    report.avg_rerouting_min = report.convergence.back().running_mean_rerouting_min;
  }
  return report;
}

namespace {

const char* outcome_name(OutcomeKind k) {
  return k == OutcomeKind::kParked ? "parked" : "abandoned";
}

void emit_csv(const MetricsReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const double reps = r.replications > 0 ? r.replications : 1;

  std::string rerouting = "replication,vehicle_id,group,rerouting_s,outcome\n";
  for (const auto& v : r.vehicles) {
    rerouting += std::to_string(v.replication) + "," +
                 std::to_string(v.vehicle_id) + "," + to_string(v.group) + "," +
                 (v.rerouting_s ? io::shortest(*v.rerouting_s) : std::string()) +
                 "," + outcome_name(v.outcome) + "\n";
  }
  io::write_text(dir / "rerouting.csv", rerouting);

  // Mean per replication, one row per lot.
  std::string failures = "lot_id,failures,unused\n";
  if (r.replications > 0) {
    for (std::size_t i = 0; i < r.lot_ids.size(); ++i) {
      failures += std::to_string(r.lot_ids[i]) + "," +
                  io::shortest(r.failed_by_last_lot[i] / reps) + "," +
                  io::shortest(r.unused_by_lot[i] / reps) + "\n";
    }
  }
  io::write_text(dir / "failures.csv", failures);

  std::string by_rep = "replication,lot_id,failures,unused\n";
  for (std::size_t rep = 0; rep < r.per_replication_failures.size(); ++rep) {
    const auto& f = r.per_replication_failures[rep];
    for (std::size_t i = 0; i < r.lot_ids.size(); ++i) {
      by_rep += std::to_string(rep + 1) + "," + std::to_string(r.lot_ids[i]) +
                "," + std::to_string(f.failed_by_last_lot[i]) + "," +
                std::to_string(f.unused_by_lot[i]) + "\n";
    }
  }
  io::write_text(dir / "failures_by_replication.csv", by_rep);

  std::string convergence = "replication,mean_rerouting_min,total_failures\n";
  std::string running = "replication,running_mean_rerouting_min\n";
  for (const auto& c : r.convergence) {
    convergence += std::to_string(c.replication) + "," +
                   io::shortest(c.running_mean_rerouting_min) + "," +
                   io::shortest(c.running_mean_failures) + "\n";
    running += std::to_string(c.replication) + "," +
               io::shortest(c.running_mean_rerouting_min) + "\n";
  }
  io::write_text(dir / "convergence.csv", convergence);
  io::write_text(dir / "running_mean.csv", running);
}

void emit_json(const MetricsReport& r, const std::filesystem::path& path) {
  using Json = nlohmann::ordered_json;
  Json j;
  j["replications"] = r.replications;
  j["avg_rerouting_min"] = r.avg_rerouting_min;
  j["parked_total"] = r.parked_total;
  j["abandoned_total"] = r.abandoned_total;
  j["lots"] = Json::array();
  for (std::size_t i = 0; i < r.lot_ids.size(); ++i) {
    j["lots"].push_back({{"lot_id", r.lot_ids[i]},
                         {"failures", r.failed_by_last_lot[i]},
                         {"unused", r.unused_by_lot[i]}});
  }
  j["convergence"] = Json::array();
  for (const auto& c : r.convergence) {
    j["convergence"].push_back(
        {{"replication", c.replication},
         {"mean_rerouting_min", c.running_mean_rerouting_min},
         {"total_failures", c.running_mean_failures}});
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  io::write_text(path, j.dump(2) + "\n");
}

}  // namespace

void emit_report(const MetricsReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  try {
    if (format == ReportFormat::kCsv) {
      emit_csv(report, path);
    } else {
      emit_json(report, path);
    }
  } catch (const std::filesystem::filesystem_error& e) {
    throw std::runtime_error("cannot write report to " + path.string() + ": " +
                             e.what());
  }
}

std::vector<MethodResult> compare_methods(const Scenario& s, int replications,
                                          std::uint64_t seed_base) {
  struct Config {
    const char* name;
    std::array<double, 4> mix;
    double random_fraction;
  };
  const Config configs[] = {
      {"g3_only", {0, 0, 1, 0}, 0.0},
      {"g4_only", {0, 0, 0, 1}, 0.0},
      {"combined", s.strategy_mix, s.random_fraction},
  };

  std::vector<MethodResult> rows;
  for (const auto& c : configs) {
    Scenario variant = s;
    variant.strategy_mix = c.mix;
    variant.random_fraction = c.random_fraction;
    const RunManyResult res = run_many(variant, {replications, seed_base});
    MethodResult row;
    row.method = c.name;
    for (const auto& rep : res.replications) {
      row.rerouting_min_by_replication.push_back(rep.mean_rerouting_s / 60.0);
      row.failures_by_replication.push_back(rep.run.abandoned_count());
    }
    row.mean_rerouting_min = res.convergence.back().running_mean_rerouting_min;
    row.mean_failures = res.convergence.back().running_mean_failures;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_comparison_csv(const std::vector<MethodResult>& rows,
                          const std::filesystem::path& path) {
  std::string out = "method,mean_rerouting_min,total_failures\n";
  for (const auto& r : rows) {
    out += r.method + "," + io::shortest(r.mean_rerouting_min) + "," +
           io::shortest(r.mean_failures) + "\n";
  }
  io::write_text(path, out);
}

}  // namespace parkassign
