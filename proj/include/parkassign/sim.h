#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "parkassign/arrivals.h"
#include "parkassign/assign.h"
#include "parkassign/drivers.h"
#include "parkassign/scenario.h"

namespace parkassign {

struct LotState {
  int lot_id = 0;
  int occupied = 0;
  std::vector<int> per_floor_occupied;

  bool operator==(const LotState&) const = default;
};

enum class OutcomeKind { kParked, kAbandoned };

struct VehicleOutcome {
  int vehicle_id = 0;
  OutcomeKind kind = OutcomeKind::kAbandoned;
  // Parked: the lot parked in. Abandoned: the last lot visited, -1 if none.
  int lot = -1;
  double entry_time = 0.0;  // seconds after window start
  double end_time = 0.0;    // park or abandon time
  double drive_total = 0.0;  // all drive legs plus inspections of full lots
  double search_time = 0.0;  // in-lot search at the final lot
  double walk_time = 0.0;
  double elapsed_search = 0.0;
  int full_lots_visited = 0;

  bool parked() const { return kind == OutcomeKind::kParked; }
  // Entry to destination for a parked vehicle: drive, search, walk.
  double total_time() const { return drive_total + search_time + walk_time; }

  bool operator==(const VehicleOutcome&) const = default;
};

enum class EventKind { kEnter, kArriveLot, kPark, kRedirect, kAbandon };

const char* to_string(EventKind kind);

struct EventRecord {
  double time = 0.0;
  int vehicle_id = 0;
  EventKind kind = EventKind::kEnter;
  int lot = -1;  // lot index; redirect names the new target

  bool operator==(const EventRecord&) const = default;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<VehicleOutcome> outcomes;
  std::vector<LotState> final_lots;
  std::vector<EventRecord> events;  // empty unless recording was requested

  int parked_count() const;
  int abandoned_count() const;
  std::int64_t occupied_total() const;

  bool operator==(const RunResult&) const = default;
};

struct RunOptions {
  bool record_events = false;
};

/// One replication. Vehicles enter at their scheduled time, drive to the
/// target their strategy picks, park on the lowest non-full floor if there
/// is space, and otherwise either abandon (cumulative search time past their
/// budget) or drive on to the next target. Events are processed in
/// simulated-time order, ties by vehicle id.
RunResult run_once(const Scenario& s, const ScenarioGeometry& g,
                   const ArrivalSchedule& sched,
                   const std::vector<DriverProfile>& profiles,
                   std::uint64_t seed, RunOptions options = {});

/// Replays the event log and returns every broken invariant: capacity
/// overflow, out-of-order events, missing or duplicate outcomes, and
/// conservation between parked vehicles and final occupancy.
std::vector<std::string> replay_check(const Scenario& s, const RunResult& run);

void write_event_log(const RunResult& run, const Scenario& s,
                     const std::filesystem::path& path);

// Everything produced for one seeded replication.
struct Replication {
  int index = 0;  // 1-based
  std::uint64_t seed = 0;
  ArrivalSchedule schedule;
  std::vector<DriverProfile> profiles;
  AssignmentProblem problem;
  Assignment optimal;
  RunResult run;
  double mean_rerouting_s = 0.0;  // over parked vehicles
};

struct ConvergencePoint {
  int replication = 0;
  double running_mean_rerouting_min = 0.0;
  double running_mean_failures = 0.0;

  bool operator==(const ConvergencePoint&) const = default;
};

struct RunManyOptions {
  int replications = 1;
  std::uint64_t seed_base = 1;
  bool record_events = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct RunManyResult {
  std::vector<Replication> replications;
  std::vector<ConvergencePoint> convergence;
};

std::uint64_t replication_seed(std::uint64_t seed_base, int replication);

/// Replication r (1-based) uses replication_seed(seed_base, r) for its
/// schedule, profiles and run, so the first n replications do not depend on
/// how many are requested. Replications may run in parallel; results are
/// ordered by index.
RunManyResult run_many(const Scenario& s, const RunManyOptions& options);

/// Running means after each replication.
std::vector<ConvergencePoint> convergence_series(
    const std::vector<Replication>& reps);

}  // namespace parkassign
