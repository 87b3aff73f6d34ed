#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <mpfr.h>

#include "parkassign/arrivals.h"
#include "parkassign/drivers.h"
#include "parkassign/geo.h"
#include "parkassign/scenario.h"

namespace parkassign::test {

inline std::filesystem::path data_dir() { return PARKASSIGN_DATA_DIR; }

inline std::filesystem::path bundled_scenario() {
  return data_dir() / "berkeley-synthetic.json";
}

// Geometry laid out directly in the plane, so distances can be chosen by
// hand. The matching Scenario carries capacities only; its geographic
// fields are not consulted by the planner or the simulation.
inline ScenarioGeometry plane_geometry(std::vector<PlanePoint> lots,
                                       std::vector<PlanePoint> entries,
                                       PlanePoint destination) {
  ScenarioGeometry g;
  g.lots = std::move(lots);
  g.entries = std::move(entries);
  g.destination = destination;
  g.distances = DistanceMatrix(g.lots, g.entries, g.destination);
  g.group2_exclusion_radius = default_exclusion_radius(g.distances.lot_dest());
  return g;
}

inline Scenario plane_scenario(const std::vector<int>& capacities,
                               int n_entries, int vehicles) {
  Scenario s;
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    ParkingLot lot;
    lot.id = static_cast<int>(i) + 1;
    lot.capacity = capacities[i];
    lot.floor_capacities = {capacities[i]};
    s.lots.push_back(lot);
  }
  for (int e = 0; e < n_entries; ++e) s.entries.push_back({e + 1, {}});
  s.vehicle_count = vehicles;
  return s;
}

inline ArrivalSchedule fixed_schedule(std::vector<double> times,
                                      std::vector<int> entries) {
  ArrivalSchedule a;
  a.times = std::move(times);
  a.entry_index = std::move(entries);
  return a;
}

inline std::vector<DriverProfile> uniform_profiles(int k, SearchGroup group,
                                                   double budget) {
  std::vector<DriverProfile> out(k);
  for (int v = 0; v < k; ++v) out[v] = {v, group, budget};
  return out;
}

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// Miller projection evaluated in 256-bit floating point, straight from the
// closed forms. Independent of the library's double implementation.
inline PlanePoint miller_reference(double lon, double lat) {
  constexpr mpfr_prec_t prec = 256;
  mpfr_t pi, r, circ, t, yp, x, y;
  for (auto* v : {&pi, &r, &circ, &t, &yp, &x, &y}) mpfr_init2(*v, prec);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_ui(r, 6381372, MPFR_RNDN);
  mpfr_mul(circ, pi, r, MPFR_RNDN);
  mpfr_mul_ui(circ, circ, 2, MPFR_RNDN);  // L

  // y' = 1.25 ln tan(pi/4 + 0.4 lat)
  mpfr_set_d(t, lat, MPFR_RNDN);
  mpfr_mul_ui(t, t, 2, MPFR_RNDN);
  mpfr_div_ui(t, t, 5, MPFR_RNDN);
  mpfr_t q;
  mpfr_init2(q, prec);
  mpfr_div_ui(q, pi, 4, MPFR_RNDN);
  mpfr_add(t, t, q, MPFR_RNDN);
  mpfr_tan(t, t, MPFR_RNDN);
  mpfr_log(t, t, MPFR_RNDN);
  mpfr_mul_ui(yp, t, 5, MPFR_RNDN);
  mpfr_div_ui(yp, yp, 4, MPFR_RNDN);

  // x = L/2 + L/(2 pi) * lon
  mpfr_set_d(t, lon, MPFR_RNDN);
  mpfr_mul(t, t, circ, MPFR_RNDN);
  mpfr_div(t, t, pi, MPFR_RNDN);
  mpfr_div_ui(t, t, 2, MPFR_RNDN);
  mpfr_div_ui(x, circ, 2, MPFR_RNDN);
  mpfr_add(x, x, t, MPFR_RNDN);

  // y = L/4 - L/(4 * 2.3) * y'
  mpfr_mul(t, circ, yp, MPFR_RNDN);
  mpfr_div_ui(t, t, 92, MPFR_RNDN);
  mpfr_mul_ui(t, t, 10, MPFR_RNDN);
  mpfr_div_ui(y, circ, 4, MPFR_RNDN);
  mpfr_sub(y, y, t, MPFR_RNDN);

  PlanePoint out{mpfr_get_d(x, MPFR_RNDN), mpfr_get_d(y, MPFR_RNDN)};
  for (auto* v : {&pi, &r, &circ, &t, &yp, &x, &y, &q}) mpfr_clear(*v);
  return out;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace parkassign::test

#include <random>

#include "parkassign/assign.h"

namespace parkassign::test {

// Random small assignment instance: up to `max_k` vehicles, up to
// `max_lots` lots of capacity up to `max_cap`, with enough total capacity.
// Slot costs are non-decreasing within a lot, as they are for real lots.
// A narrow cost range is used now and then to force ties.
inline AssignmentProblem random_problem(std::mt19937_64& rng, int max_k = 8,
                                        int max_lots = 4, int max_cap = 3) {
  auto uni = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int lots = uni(1, max_lots);
  std::vector<int> cap(lots);
  int total = 0;
  for (auto& c : cap) total += (c = uni(1, max_cap));
  const int k = uni(0, std::min(max_k, total));
  const Millis hi = uni(0, 3) == 0 ? 3 : 200000;
  std::uniform_int_distribution<Millis> cost(0, hi);
  std::vector<std::vector<Millis>> lot_cost(k, std::vector<Millis>(lots));
  for (auto& row : lot_cost) {
    for (auto& c : row) c = cost(rng);
  }
  std::vector<std::vector<Millis>> slot_cost(lots);
  for (int i = 0; i < lots; ++i) {
    Millis acc = cost(rng);
    for (int n = 0; n < cap[i]; ++n) {
      slot_cost[i].push_back(acc);
      acc += cost(rng) / 4;
    }
  }
  return AssignmentProblem::from_costs(k, lot_cost, slot_cost);
}

}  // namespace parkassign::test
