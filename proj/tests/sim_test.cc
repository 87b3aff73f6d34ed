#include <gtest/gtest.h>

#include <algorithm>

#include "parkassign/arrivals.h"
#include "parkassign/metrics.h"
#include "parkassign/sim.h"
#include "support.h"

using namespace parkassign;
using namespace parkassign::test;

namespace {

Scenario berkeley() { return generate_synthetic(SyntheticSpec{}, 7); }

TEST(RunOnce, SingleVehicleParksDirectly) {
  const Scenario s = plane_scenario({5}, 1, 1);
  const ScenarioGeometry g = plane_geometry({{417, 0}}, {{0, 0}}, {417, 139});
  const auto sched = fixed_schedule({10.0}, {0});
  const auto profiles = uniform_profiles(1, SearchGroup::kNearestFromEntry, 100.0);
  const RunResult r = run_once(s, g, sched, profiles, 1, {true});
  ASSERT_TRUE(r.outcomes[0].parked());
  EXPECT_EQ(r.outcomes[0].search_time, 60.0);
  EXPECT_DOUBLE_EQ(r.outcomes[0].drive_total, 100.0);
  EXPECT_DOUBLE_EQ(r.outcomes[0].end_time, 110.0);
  EXPECT_EQ(r.events.size(), 3u);
  EXPECT_TRUE(replay_check(s, r).empty());

  const AssignmentProblem p = build_problem(s, g, sched);
  const auto rr = rerouting_time(r, solve_exact(p), p);
  EXPECT_EQ(*rr.per_vehicle_s[0], 0.0);
}

TEST(RunOnce, SecondVehicleFindsTheOnlySpaceTaken) {
  const Scenario s = plane_scenario({1}, 1, 2);
  const ScenarioGeometry g = plane_geometry({{100, 0}}, {{0, 0}}, {100, 0});
  const RunResult r = run_once(s, g, fixed_schedule({5.0, 0.0}, {0, 0}),
                               uniform_profiles(2, SearchGroup::kNearestFromEntry, kForever),
                               1, {true});
  EXPECT_TRUE(r.outcomes[1].parked());
  EXPECT_FALSE(r.outcomes[0].parked());
  EXPECT_EQ(r.outcomes[0].full_lots_visited, 1);
  EXPECT_EQ(r.outcomes[0].lot, 0);
  EXPECT_TRUE(replay_check(s, r).empty());
}

TEST(RunOnce, SimultaneousArrivalsBreakTiesByVehicleId) {
  const Scenario s = plane_scenario({1}, 2, 2);
  const ScenarioGeometry g = plane_geometry({{100, 0}}, {{0, 0}, {200, 0}}, {100, 0});
  const RunResult r = run_once(s, g, fixed_schedule({0.0, 0.0}, {1, 0}),
                               uniform_profiles(2, SearchGroup::kNearestFromEntry, kForever),
                               1);
  EXPECT_TRUE(r.outcomes[0].parked());
  EXPECT_FALSE(r.outcomes[1].parked());
}

TEST(RunOnce, RedirectAddsLegAndInspection) {
  // Lot A (index 0) is next to the destination, lot B is near entry 1.
  // Vehicle 0 fills A; vehicle 1 tries A first, then drives back to B.
  const Scenario s = plane_scenario({1, 1}, 2, 2);
  const ScenarioGeometry g =
      plane_geometry({{300, 0}, {100, 0}}, {{500, 0}, {0, 0}}, {400, 0});
  const auto sched = fixed_schedule({0.0, 100.0}, {0, 1});
  const auto profiles = uniform_profiles(2, SearchGroup::kNearestToDestination, kForever);
  const RunResult r = run_once(s, g, sched, profiles, 1, {true});
  ASSERT_TRUE(r.outcomes[0].parked());
  ASSERT_TRUE(r.outcomes[1].parked());
  EXPECT_EQ(r.outcomes[1].lot, 1);
  EXPECT_EQ(r.outcomes[1].full_lots_visited, 1);
  const double v_r = s.kinematics.cruise_speed;
  EXPECT_NEAR(r.outcomes[1].drive_total, 300 / v_r + 30 + 200 / v_r, 1e-9);

  const AssignmentProblem p = build_problem(s, g, sched);
  const Assignment opt = solve_exact(p);
  ASSERT_EQ(opt.lot_of, (std::vector<int>{0, 1}));
  const auto rr = rerouting_time(r, opt, p);
  EXPECT_NEAR(*rr.per_vehicle_s[0], 0.0, 1e-9);
  EXPECT_NEAR(*rr.per_vehicle_s[1], 400 / v_r + 30, 1e-9);
  EXPECT_TRUE(replay_check(s, r).empty());
}

TEST(RunOnce, ZeroToleranceLeavesAfterOneFullLot) {
  // Vehicle 0 fills the near lot; the rest arrive later with a tiny budget.
  const int k = 6;
  Scenario s = plane_scenario({1, 10}, 1, k);
  const ScenarioGeometry g = plane_geometry({{100, 0}, {900, 0}}, {{0, 0}}, {100, 0});
  std::vector<double> times{0};
  for (int v = 1; v < k; ++v) times.push_back(100.0 + v);
  auto profiles = uniform_profiles(k, SearchGroup::kNearestToDestination, 1e-9);
  profiles[0].tolerance_budget = kForever;
  const RunResult r = run_once(s, g, fixed_schedule(times, std::vector<int>(k, 0)),
                               profiles, 1, {true});
  EXPECT_TRUE(r.outcomes[0].parked());
  for (int v = 1; v < k; ++v) {
    EXPECT_FALSE(r.outcomes[v].parked());
    EXPECT_EQ(r.outcomes[v].full_lots_visited, 1);
    EXPECT_EQ(r.outcomes[v].lot, 0);
  }
  EXPECT_TRUE(replay_check(s, r).empty());
}

TEST(RunOnce, InfiniteToleranceFillsEverySpace) {
  const Scenario s = berkeley();
  const ScenarioGeometry g = build_geometry(s);
  auto profiles = assign_profiles(s, 3);
  for (auto& p : profiles) p.tolerance_budget = kForever;
  const RunResult r = run_once(s, g, sample_arrivals(s, 3), profiles, 3, {true});
  EXPECT_EQ(r.parked_count(), 3992);
  EXPECT_EQ(r.occupied_total(), 3992);
  EXPECT_TRUE(replay_check(s, r).empty());
}

TEST(RunOnce, DemandEqualsSupplyConservation) {
  const Scenario s = berkeley();
  const ScenarioGeometry g = build_geometry(s);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const RunResult r = run_once(s, g, sample_arrivals(s, seed), assign_profiles(s, seed),
                                 seed, {true});
    EXPECT_TRUE(replay_check(s, r).empty());
    EXPECT_EQ(r.parked_count() + r.abandoned_count(), 3992);
    const auto f = lot_failures(r, s);
    EXPECT_EQ(f.total_failed, f.total_unused);
    EXPECT_GT(f.total_failed, 0);
  }
}

TEST(RunOnce, Deterministic) {
  Scenario s = berkeley();
  s.random_fraction = 0.2;
  const ScenarioGeometry g = build_geometry(s);
  const auto sched = sample_arrivals(s, 8);
  const auto profiles = assign_profiles(s, 8);
  EXPECT_EQ(run_once(s, g, sched, profiles, 8, {true}),
            run_once(s, g, sched, profiles, 8, {true}));
}

TEST(ReplayCheck, DetectsTampering) {
  const Scenario s = plane_scenario({1}, 1, 2);
  const ScenarioGeometry g = plane_geometry({{100, 0}}, {{0, 0}}, {100, 0});
  const RunResult good = run_once(s, g, fixed_schedule({0.0, 5.0}, {0, 0}),
                                  uniform_profiles(2, SearchGroup::kNearestFromEntry, kForever),
                                  1, {true});
  ASSERT_TRUE(replay_check(s, good).empty());

  RunResult overfull = good;  // both vehicles claim the single space
  overfull.outcomes[1].kind = OutcomeKind::kParked;
  for (auto& e : overfull.events) {
    if (e.vehicle_id == 1 && e.kind == EventKind::kAbandon) {
      e.kind = EventKind::kPark;
      e.lot = 0;
    }
  }
  EXPECT_FALSE(replay_check(s, overfull).empty());

  RunResult shuffled = good;
  std::swap(shuffled.events.front(), shuffled.events.back());
  EXPECT_FALSE(replay_check(s, shuffled).empty());

  RunResult missing = good;
  missing.outcomes.pop_back();
  EXPECT_FALSE(replay_check(s, missing).empty());
}

TEST(RunMany, SingleReplication) {
  const RunManyResult r = run_many(berkeley(), {1, 5});
  EXPECT_EQ(r.replications.size(), 1u);
  EXPECT_EQ(r.convergence.size(), 1u);
  EXPECT_EQ(r.replications[0].index, 1);
  EXPECT_EQ(r.replications[0].seed, replication_seed(5, 1));
}

TEST(RunMany, RepeatableAndPrefixStable) {
  const Scenario s = berkeley();
  RunManyOptions o{20, 11};
  const RunManyResult a = run_many(s, o);
  o.threads = 1;
  const RunManyResult b = run_many(s, o);
  o.replications = 10;
  const RunManyResult c = run_many(s, o);
  ASSERT_EQ(a.replications.size(), 20u);
  for (int r = 0; r < 20; ++r) {
    EXPECT_EQ(a.replications[r].run, b.replications[r].run);
    EXPECT_EQ(a.replications[r].seed, b.replications[r].seed);
  }
  for (int r = 0; r < 10; ++r) {
    EXPECT_EQ(a.replications[r].run, c.replications[r].run);
    EXPECT_EQ(a.convergence[r], c.convergence[r]);
  }
  EXPECT_NE(a.replications[0].run.outcomes, a.replications[1].run.outcomes);
}

TEST(RunMany, ConvergenceIsRunningMean) {
  const RunManyResult r = run_many(berkeley(), {6, 2});
  double rer = 0.0, fail = 0.0;
  for (std::size_t i = 0; i < r.replications.size(); ++i) {
    const auto& rep = r.replications[i];
    rer += rerouting_time(rep.run, rep.optimal, rep.problem).mean_min();
    fail += rep.run.abandoned_count();
    EXPECT_NEAR(r.convergence[i].running_mean_rerouting_min, rer / (i + 1), 1e-12);
    EXPECT_NEAR(r.convergence[i].running_mean_failures, fail / (i + 1), 1e-12);
  }
}

}  // namespace
