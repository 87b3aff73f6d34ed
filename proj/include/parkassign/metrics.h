#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parkassign/assign.h"
#include "parkassign/sim.h"

namespace parkassign {

struct ReroutingResult {
  // Simulated entry-to-destination time minus the optimal-assignment cost,
  // seconds; empty for abandoned vehicles. Signed.
  std::vector<std::optional<double>> per_vehicle_s;
  double mean_s = 0.0;  // over parked vehicles, 0 when none parked
  int parked = 0;
  int abandoned = 0;

  double mean_min() const { return mean_s / 60.0; }
};

/// Throws std::invalid_argument if run and assignment disagree on the
/// vehicle set.
ReroutingResult rerouting_time(const RunResult& run, const Assignment& optimal,
                               const AssignmentProblem& p);

struct LotFailures {
  std::vector<int> failed_by_last_lot;
  std::vector<int> unused_by_lot;
  int total_failed = 0;
  int total_unused = 0;
};

LotFailures lot_failures(const RunResult& run, const Scenario& s);

struct FailureReport {
  std::vector<LotFailures> per_replication;
  // Sums over replications.
  std::vector<int> failed_by_last_lot;
  std::vector<int> unused_by_lot;
};

FailureReport failed_search_report(const std::vector<const RunResult*>& runs,
                                   const Scenario& s);

struct VehicleRerouting {
  int replication = 0;
  int vehicle_id = 0;
  SearchGroup group = SearchGroup::kNearestFromEntry;
  std::optional<double> rerouting_s;
  OutcomeKind outcome = OutcomeKind::kParked;
};

struct MetricsReport {
  std::vector<int> lot_ids;
  int replications = 0;
  double avg_rerouting_min = 0.0;  // mean of per-replication means
  std::vector<VehicleRerouting> vehicles;
  // Summed over replications.
  std::vector<int> failed_by_last_lot;
  std::vector<int> unused_by_lot;
  std::int64_t abandoned_total = 0;
  std::int64_t parked_total = 0;
  std::vector<LotFailures> per_replication_failures;
  std::vector<ConvergencePoint> convergence;
};

MetricsReport build_report(const Scenario& s, const std::vector<Replication>& reps);

enum class ReportFormat { kCsv, kJson };

/// kCsv: `path` is a directory receiving rerouting.csv, failures.csv,
/// failures_by_replication.csv, convergence.csv and running_mean.csv.
/// kJson: `path` is the output file. Output is byte-stable for equal reports.
void emit_report(const MetricsReport& report, ReportFormat format,
                 const std::filesystem::path& path);

struct MethodResult {
  std::string method;
  double mean_rerouting_min = 0.0;
  double mean_failures = 0.0;  // failed searches per replication
  std::vector<double> rerouting_min_by_replication;
  std::vector<int> failures_by_replication;
};

/// Paired comparison on identical seeds and schedules: G3 only,
/// G4 only, and the scenario's own mix ("combined").
std::vector<MethodResult> compare_methods(const Scenario& s, int replications,
                                          std::uint64_t seed_base);

/// comparison.csv: method,mean_rerouting_min,total_failures
void write_comparison_csv(const std::vector<MethodResult>& rows,
                          const std::filesystem::path& path);

}  // namespace parkassign
