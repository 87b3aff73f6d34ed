#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "parkassign/arrivals.h"
#include "parkassign/scenario.h"

namespace parkassign {

using Millis = std::int64_t;

Millis to_millis(double seconds);

// Vehicle x slot cost structure. Lot i is expanded into capacity_i unit
// slots; the n-th slot (1-based) carries the in-lot search time at marginal
// occupancy (n - 1) / capacity_i. The cost of vehicle k in slot (i, n) is
//
//   lot_cost_ms(k, i) + slot_cost_ms[i][n - 1]
//
// where the lot part is drive + walk time. Only this separable form is
// stored; the dense K x total_slots matrix is never materialized.
struct AssignmentProblem {
  int vehicle_count = 0;
  std::vector<int> lot_ids;
  std::vector<std::vector<Millis>> slot_cost_ms;  // [lot][n-1], non-decreasing
  std::vector<Millis> lot_cost_ms;                // K x lots, row-major

  // Seconds-valued components, used to report per-vehicle costs with the
  // same arithmetic as the simulation.
  std::vector<double> drive_s;                 // K x lots
  std::vector<double> walk_s;                  // per lot
  std::vector<std::vector<double>> search_s;   // [lot][n-1]
  // Time each vehicle would reach each lot driving directly; orders slots
  // within a lot.
  std::vector<double> lot_arrival_s;           // K x lots
  std::vector<int> entry_id;                   // per vehicle, -1 if unknown

  std::size_t lot_count() const { return lot_ids.size(); }
  int capacity(std::size_t lot) const {
    return static_cast<int>(slot_cost_ms[lot].size());
  }
  std::int64_t total_slots() const;
  Millis lot_cost(int vehicle, std::size_t lot) const {
    return lot_cost_ms[static_cast<std::size_t>(vehicle) * lot_count() + lot];
  }
  /// Cost of vehicle k in slot n (1-based) of lot i.
  Millis cost(int vehicle, std::size_t lot, int slot) const {
    return lot_cost(vehicle, lot) + slot_cost_ms[lot][slot - 1];
  }

  /// Generic instance from integer costs; seconds fields are derived as
  /// ms / 1000 and arrival order is vehicle order.
  static AssignmentProblem from_costs(
      int vehicle_count, const std::vector<std::vector<Millis>>& lot_cost,
      const std::vector<std::vector<Millis>>& slot_cost);
};

class InfeasibleProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws InfeasibleProblem when demand exceeds capacity.
AssignmentProblem build_problem(const Scenario& s, const ScenarioGeometry& g,
                                const ArrivalSchedule& sched);

struct Assignment {
  std::vector<int> lot_of;        // lot index per vehicle
  std::vector<int> slot_of;       // 1-based slot index within the lot
  std::vector<double> per_vehicle_cost;  // seconds: drive + search + walk
  double total_cost = 0.0;        // seconds, sum of per_vehicle_cost
  Millis total_cost_ms = 0;       // integer objective
};

/// Exact minimum-cost assignment by successive shortest augmenting paths
/// with node potentials. Vehicles with identical lot-cost rows are
/// interchangeable, so they share one supply node; each lot's slots form a
/// single convex arc to the sink whose cost is that of the next free slot.
Assignment solve_exact(const AssignmentProblem& p);

struct BruteForceResult {
  Assignment assignment;
  std::int64_t feasible_lot_maps = 0;   // vehicle -> lot maps within capacity
  std::int64_t feasible_slot_maps = 0;  // injective vehicle -> slot maps
};

inline constexpr std::int64_t kBruteForceLimit = 10'000'000;

/// Exhaustive enumeration of vehicle -> lot maps. Throws InstanceTooLarge
/// when lots^K exceeds kBruteForceLimit.
BruteForceResult brute_force_solve(const AssignmentProblem& p);

/// Recomputes the integer objective of `a` from scratch. Throws
/// InfeasibleProblem if `a` breaks a constraint.
Millis assignment_cost(const Assignment& a, const AssignmentProblem& p);

/// Per-lot vehicle counts.
std::vector<int> lot_counts(const Assignment& a, std::size_t lot_count);

/// Optimality certificate: with the lot-level flow implied by `a`, the
/// residual network has no negative cycle (Bellman-Ford potentials exist
/// and every residual arc has non-negative reduced cost).
bool certify_optimal(const Assignment& a, const AssignmentProblem& p);

/// Builds an Assignment from a vehicle -> lot map: slots within each lot go
/// to vehicles in order of direct arrival time, ties by vehicle index.
Assignment finalize_assignment(const AssignmentProblem& p,
                               std::vector<int> lot_of);

/// CSV: vehicle_id,entry_id,lot_id,TD_s,TS_s,TW_s,total_s
void write_assignment_csv(const Assignment& a, const AssignmentProblem& p,
                          const std::filesystem::path& path);

}  // namespace parkassign
