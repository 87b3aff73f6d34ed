#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parkassign/rng.h"
#include "parkassign/scenario.h"

namespace parkassign {

enum class SearchGroup {
  kNearestFromEntry,         // G1
  kNearestExcludingCore,     // G2
  kNearestToDestination,     // G3
  kMinDrivePlusWalk,         // G4
  kRandom,
};

inline constexpr int kSearchGroupCount = 5;

const char* to_string(SearchGroup g);
std::optional<SearchGroup> parse_search_group(const std::string& s);

struct DriverProfile {
  int vehicle_id = 0;
  SearchGroup group = SearchGroup::kNearestFromEntry;
  double tolerance_budget = 0.0;  // seconds of search before giving up

  bool operator==(const DriverProfile&) const = default;
};

struct SearchState {
  PlanePoint position;
  std::vector<char> visited;  // per lot index
  int visited_count = 0;
  double elapsed_search = 0.0;

  void visit(std::size_t lot) {
    if (!visited[lot]) {
      visited[lot] = 1;
      ++visited_count;
    }
  }
};

/// Groups: with probability random_fraction a driver is Random, otherwise
/// drawn from the four-way strategy mix. Budgets are Gamma(shape, scale).
/// Groups and budgets come from separate streams, so changing the mix leaves
/// the budgets of a seed unchanged.
std::vector<DriverProfile> assign_profiles(const Scenario& s,
                                           std::uint64_t seed);

/// Throws std::invalid_argument unless shape > 0 and scale > 0.
double sample_tolerance(double shape, double scale, Rng& rng);
std::vector<double> sample_tolerances(double shape, double scale,
                                      std::uint64_t seed, std::size_t count);

// Static per-scenario data the strategies read.
struct StrategyContext {
  const ScenarioGeometry* geometry = nullptr;
  const KinematicParams* kinematics = nullptr;
};

/// Integer-scaled criterion of `group` for driving from `state` to `lot`:
/// millimeters for the distance groups, milliseconds for G4. Random has no
/// criterion (returns 0).
std::int64_t target_criterion(SearchGroup group, const SearchState& state,
                              std::size_t lot, const StrategyContext& ctx);

/// Next lot to try, or nullopt once every lot has been visited. Lots a
/// driver has not yet visited are all believed available. `rng` is only
/// used by the Random group.
std::optional<std::size_t> next_target(const DriverProfile& profile,
                                       const SearchState& state,
                                       const StrategyContext& ctx, Rng& rng);

inline bool should_abandon(const SearchState& state,
                           const DriverProfile& profile) {
  return state.elapsed_search > profile.tolerance_budget;
}

}  // namespace parkassign
