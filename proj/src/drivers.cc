#include "parkassign/drivers.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace parkassign {

const char* to_string(SearchGroup g) {
  switch (g) {
    case SearchGroup::kNearestFromEntry:
      return "G1";
    case SearchGroup::kNearestExcludingCore:
      return "G2";
    case SearchGroup::kNearestToDestination:
      return "G3";
    case SearchGroup::kMinDrivePlusWalk:
      return "G4";
    case SearchGroup::kRandom:
      return "Random";
  }
  return "G1";
}

std::optional<SearchGroup> parse_search_group(const std::string& s) {
  for (int g = 0; g < kSearchGroupCount; ++g) {
    const auto group = static_cast<SearchGroup>(g);
    if (s == to_string(group)) return group;
  }
  return std::nullopt;
}

double sample_tolerance(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0 && scale > 0.0 && std::isfinite(shape) &&
        std::isfinite(scale))) {
    throw std::invalid_argument("gamma tolerance needs shape > 0, scale > 0");
  }
  std::gamma_distribution<double> gamma(shape, scale);
  double t = gamma(rng);
  // Gamma has no mass at 0; guard against an underflowed draw.
  while (!(t > 0.0)) t = gamma(rng);
  return t;
}

std::vector<double> sample_tolerances(double shape, double scale,
                                      std::uint64_t seed, std::size_t count) {
  Rng rng(derive_seed(seed, streams::kTolerance));
  std::vector<double> out(count);
  for (auto& t : out) t = sample_tolerance(shape, scale, rng);
  return out;
}

std::vector<DriverProfile> assign_profiles(const Scenario& s,
                                           std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(s.vehicle_count);
  const auto budgets = sample_tolerances(s.gamma_tolerance.shape,
                                         s.gamma_tolerance.scale, seed, k);
  Rng rng(derive_seed(seed, streams::kGroups));
  double mix_total = 0.0;
  for (double w : s.strategy_mix) mix_total += w;

  std::vector<DriverProfile> profiles(k);
  for (std::size_t v = 0; v < k; ++v) {
    auto& p = profiles[v];
    p.vehicle_id = static_cast<int>(v);
    p.tolerance_budget = budgets[v];
    // Two draws per driver regardless of outcome keep streams aligned
    // across mixes.
    const double r = uniform01(rng);
    const double u = uniform01(rng) * mix_total;
    if (r < s.random_fraction) {
      p.group = SearchGroup::kRandom;
      continue;
    }
    double acc = 0.0;
    int chosen = -1;
    int last_positive = 0;
    for (int g = 0; g < 4; ++g) {
      if (s.strategy_mix[g] <= 0.0) continue;
      last_positive = g;
      acc += s.strategy_mix[g];
      if (u < acc) {
        chosen = g;
        break;
      }
    }
    p.group = static_cast<SearchGroup>(chosen < 0 ? last_positive : chosen);
  }
  return profiles;
}

std::int64_t target_criterion(SearchGroup group, const SearchState& state,
                              std::size_t lot, const StrategyContext& ctx) {
  const ScenarioGeometry& g = *ctx.geometry;
  switch (group) {
    case SearchGroup::kNearestFromEntry:
    case SearchGroup::kNearestExcludingCore:
      return std::llround(geo::manhattan(state.position, g.lots[lot]) * 1000.0);
    case SearchGroup::kNearestToDestination:
      return std::llround(g.distances.lot_dest(lot) * 1000.0);
    case SearchGroup::kMinDrivePlusWalk: {
      const auto& k = *ctx.kinematics;
      const double t = geo::manhattan(state.position, g.lots[lot]) / k.cruise_speed +
                       g.distances.lot_dest(lot) / k.walk_speed;
      return std::llround(t * 1000.0);
    }
    case SearchGroup::kRandom:
      return 0;
  }
  return 0;
}

std::optional<std::size_t> next_target(const DriverProfile& profile,
                                       const SearchState& state,
                                       const StrategyContext& ctx, Rng& rng) {
  const ScenarioGeometry& g = *ctx.geometry;
  const std::size_t n = g.lots.size();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!state.visited[i]) candidates.push_back(i);
  }
  if (candidates.empty()) return std::nullopt;

  if (profile.group == SearchGroup::kRandom) {
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng)];
  }

  if (profile.group == SearchGroup::kNearestExcludingCore) {
    std::vector<std::size_t> outer;
    for (std::size_t i : candidates) {
      if (g.distances.lot_dest(i) >= g.group2_exclusion_radius) outer.push_back(i);
    }
    // The exclusion lifts once only core lots remain.
    if (!outer.empty()) candidates = std::move(outer);
  }

  std::size_t best = candidates.front();
  std::int64_t best_value = target_criterion(profile.group, state, best, ctx);
  for (std::size_t i : candidates) {
    const std::int64_t value = target_criterion(profile.group, state, i, ctx);
    if (value < best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

}  // namespace parkassign
