#include "parkassign/sim.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <queue>
#include <thread>
#include <tuple>

#include "parkassign/io.h"
#include "parkassign/metrics.h"
#include "parkassign/rng.h"
#include "parkassign/timing.h"

namespace parkassign {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kEnter:
      return "enter";
    case EventKind::kArriveLot:
      return "arrive_lot";
    case EventKind::kPark:
      return "park";
    case EventKind::kRedirect:
      return "redirect";
    case EventKind::kAbandon:
      return "abandon";
  }
  return "enter";
}

int RunResult::parked_count() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(),
                                        [](const auto& o) { return o.parked(); }));
}

int RunResult::abandoned_count() const {
  return static_cast<int>(outcomes.size()) - parked_count();
}

std::int64_t RunResult::occupied_total() const {
  std::int64_t total = 0;
  for (const auto& lot : final_lots) total += lot.occupied;
  return total;
}

namespace {

enum class Pending { kEnter, kArrive, kLeave };

struct PendingEvent {
  double time;
  int vehicle;
  Pending what;
  std::size_t lot;  // for kArrive

  // Min-heap on (time, vehicle).
  bool operator>(const PendingEvent& o) const {
    return std::tie(time, vehicle) > std::tie(o.time, o.vehicle);
  }
};

}  // namespace

RunResult run_once(const Scenario& s, const ScenarioGeometry& g,
                   const ArrivalSchedule& sched,
                   const std::vector<DriverProfile>& profiles,
                   std::uint64_t seed, RunOptions options) {
  const int k = s.vehicle_count;
  if (sched.size() != static_cast<std::size_t>(k) ||
      profiles.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("run_once: schedule/profiles not sized to K");
  }
  const KinematicParams& kin = s.kinematics;
  const std::size_t n_lots = s.lots.size();
  const StrategyContext ctx{&g, &kin};

  RunResult result;
  result.seed = seed;
  result.final_lots.resize(n_lots);
  for (std::size_t i = 0; i < n_lots; ++i) {
    result.final_lots[i].lot_id = s.lots[i].id;
    result.final_lots[i].per_floor_occupied.assign(s.lots[i].floors, 0);
  }
  result.outcomes.resize(k);

  std::vector<SearchState> states(k);
  std::vector<std::optional<Rng>> random_rngs(k);
  std::priority_queue<PendingEvent, std::vector<PendingEvent>,
                      std::greater<PendingEvent>>
      queue;
  for (int v = 0; v < k; ++v) {
    auto& o = result.outcomes[v];
    o.vehicle_id = v;
    o.entry_time = sched.times[v];
    states[v].position = g.entries[sched.entry_index[v]];
    states[v].visited.assign(n_lots, 0);
    if (profiles[v].group == SearchGroup::kRandom) {
      random_rngs[v].emplace(derive_seed(seed, streams::kRandomChoice, v));
    }
    queue.push({sched.times[v], v, Pending::kEnter, 0});
  }

  auto log = [&](double t, int v, EventKind kind, int lot) {
    if (options.record_events) result.events.push_back({t, v, kind, lot});
  };
  Rng unused_rng(0);
  auto rng_for = [&](int v) -> Rng& {
    return random_rngs[v] ? *random_rngs[v] : unused_rng;
  };
  auto abandon = [&](double t, int v) {
    auto& o = result.outcomes[v];
    o.kind = OutcomeKind::kAbandoned;
    o.end_time = t;
    o.elapsed_search = states[v].elapsed_search;
    o.full_lots_visited = states[v].visited_count;
    log(t, v, EventKind::kAbandon, o.lot);
  };

  while (!queue.empty()) {
    const PendingEvent ev = queue.top();
    queue.pop();
    const int v = ev.vehicle;
    SearchState& state = states[v];
    VehicleOutcome& out = result.outcomes[v];

    if (ev.what == Pending::kLeave) {
      abandon(ev.time, v);
      continue;
    }
    if (ev.what == Pending::kEnter) {
      log(ev.time, v, EventKind::kEnter, -1);
      const auto target = next_target(profiles[v], state, ctx, rng_for(v));
      if (!target) {
        abandon(ev.time, v);
        continue;
      }
      const double leg = timing::drive_time(state.position, g.lots[*target], kin);
      out.drive_total = leg;
      queue.push({ev.time + leg, v, Pending::kArrive, *target});
      continue;
    }

    const std::size_t i = ev.lot;
    log(ev.time, v, EventKind::kArriveLot, static_cast<int>(i));
    state.position = g.lots[i];
    out.lot = static_cast<int>(i);
    LotState& lot_state = result.final_lots[i];
    const ParkingLot& lot = s.lots[i];

    if (lot_state.occupied < lot.capacity) {
      const double ts = timing::search_time(
          timing::from_floor_counts(lot, lot_state.per_floor_occupied, kin));
      for (int f = 0; f < lot.floors; ++f) {
        if (lot_state.per_floor_occupied[f] < lot.floor_capacities[f]) {
          ++lot_state.per_floor_occupied[f];
          break;
        }
      }
      ++lot_state.occupied;
      out.kind = OutcomeKind::kParked;
      out.end_time = ev.time;
      out.search_time = ts;
      out.walk_time = timing::walk_time(g.lots[i], g.destination, kin);
      out.elapsed_search = ev.time - out.entry_time;
      out.full_lots_visited = state.visited_count;
      log(ev.time, v, EventKind::kPark, static_cast<int>(i));
      continue;
    }

    // The lot is full. The driver spends the inspection time finding out,
    // then leaves the region or heads for the next target.
    state.visit(i);
    state.elapsed_search = ev.time - out.entry_time + s.inspection_time;
    const auto target = should_abandon(state, profiles[v])
                            ? std::nullopt
                            : next_target(profiles[v], state, ctx, rng_for(v));
    if (!target) {
      queue.push({ev.time + s.inspection_time, v, Pending::kLeave, i});
      continue;
    }
    const double leg = timing::drive_time(state.position, g.lots[*target], kin);
    out.drive_total += s.inspection_time + leg;
    log(ev.time, v, EventKind::kRedirect, static_cast<int>(*target));
    queue.push({ev.time + s.inspection_time + leg, v, Pending::kArrive, *target});
  }
  return result;
}

std::vector<std::string> replay_check(const Scenario& s, const RunResult& run) {
  std::vector<std::string> problems;
  const int k = s.vehicle_count;
  const std::size_t n_lots = s.lots.size();
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (run.outcomes.size() != static_cast<std::size_t>(k)) {
    fail("outcome count " + std::to_string(run.outcomes.size()) +
         " != K " + std::to_string(k));
  }
  if (run.parked_count() + run.abandoned_count() != k) {
    fail("parked + abandoned != K");
  }
  if (run.occupied_total() != run.parked_count()) {
    fail("final occupancy does not equal parked count");
  }
  for (std::size_t i = 0; i < run.final_lots.size() && i < n_lots; ++i) {
    const auto& ls = run.final_lots[i];
    int floors = 0;
    for (int c : ls.per_floor_occupied) floors += c;
    if (floors != ls.occupied) fail("lot " + std::to_string(ls.lot_id) +
                                    ": floor counts do not sum to occupied");
    if (ls.occupied > s.lots[i].capacity || ls.occupied < 0) {
      fail("lot " + std::to_string(ls.lot_id) + ": final occupancy out of range");
    }
  }

  if (run.events.empty()) return problems;

  enum class Phase { kNone, kEntered, kDone };
  std::vector<Phase> phase(k, Phase::kNone);
  std::vector<double> last_time(k, 0.0);
  std::vector<int> occupied(n_lots, 0);
  double clock = run.events.front().time;
  for (const auto& ev : run.events) {
    const std::string who = "vehicle " + std::to_string(ev.vehicle_id);
    if (ev.vehicle_id < 0 || ev.vehicle_id >= k) {
      fail("event for unknown " + who);
      continue;
    }
    if (ev.time < clock) fail("event log not in time order at " + who);
    clock = std::max(clock, ev.time);
    Phase& ph = phase[ev.vehicle_id];
    if (ph == Phase::kDone) {
      fail(who + " has events after its outcome");
      continue;
    }
    if (ev.kind == EventKind::kEnter) {
      if (ph != Phase::kNone) fail(who + " entered twice");
      ph = Phase::kEntered;
    } else if (ph != Phase::kEntered) {
      fail(who + " acted before entering");
    }
    if (ev.time < last_time[ev.vehicle_id]) fail(who + " moved back in time");
    last_time[ev.vehicle_id] = ev.time;
    if (ev.kind == EventKind::kPark) {
      if (ev.lot < 0 || static_cast<std::size_t>(ev.lot) >= n_lots) {
        fail(who + " parked in unknown lot");
      } else if (++occupied[ev.lot] > s.lots[ev.lot].capacity) {
        fail("lot " + std::to_string(s.lots[ev.lot].id) + " over capacity");
      }
      ph = Phase::kDone;
    } else if (ev.kind == EventKind::kAbandon) {
      ph = Phase::kDone;
    }
  }
  for (int v = 0; v < k; ++v) {
    if (phase[v] != Phase::kDone) {
      fail("vehicle " + std::to_string(v) + " has no outcome in the log");
    }
  }
  for (std::size_t i = 0; i < n_lots && i < run.final_lots.size(); ++i) {
    if (occupied[i] != run.final_lots[i].occupied) {
      fail("lot " + std::to_string(s.lots[i].id) +
           ": replayed parks differ from final occupancy");
    }
  }
  return problems;
}

void write_event_log(const RunResult& run, const Scenario& s,
                     const std::filesystem::path& path) {
  std::string out = "time_s,vehicle_id,event,lot_id\n";
  for (const auto& ev : run.events) {
    out += io::shortest(ev.time) + "," + std::to_string(ev.vehicle_id) + "," +
           to_string(ev.kind) + "," +
           (ev.lot >= 0 ? std::to_string(s.lots[ev.lot].id) : std::string()) +
           "\n";
  }
  io::write_text(path, out);
}

std::uint64_t replication_seed(std::uint64_t seed_base, int replication) {
  return derive_seed(seed_base, streams::kReplication,
                     static_cast<std::uint64_t>(replication));
}

namespace {

Replication run_replication(const Scenario& s, const ScenarioGeometry& g,
                            int index, std::uint64_t seed, bool record) {
  Replication rep;
  rep.index = index;
  rep.seed = seed;
  rep.schedule = sample_arrivals(s, seed);
  rep.profiles = assign_profiles(s, seed);
  rep.problem = build_problem(s, g, rep.schedule);
  rep.optimal = solve_exact(rep.problem);
  rep.run = run_once(s, g, rep.schedule, rep.profiles, seed, {record});
  rep.mean_rerouting_s = rerouting_time(rep.run, rep.optimal, rep.problem).mean_s;
  return rep;
}

}  // namespace

RunManyResult run_many(const Scenario& s, const RunManyOptions& options) {
  if (options.replications < 1) {
    throw std::invalid_argument("run_many: replications must be >= 1");
  }
  const ScenarioGeometry g = build_geometry(s);
  RunManyResult result;
  result.replications.resize(options.replications);

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1,
                                 static_cast<unsigned>(options.replications));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int r; (r = next.fetch_add(1)) < options.replications;) {
      try {
        result.replications[r] =
            run_replication(s, g, r + 1, replication_seed(options.seed_base, r + 1),
                            options.record_events);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  result.convergence = convergence_series(result.replications);
  return result;
}

std::vector<ConvergencePoint> convergence_series(
    const std::vector<Replication>& reps) {
  std::vector<ConvergencePoint> series;
  double sum_rerouting = 0.0;
  double sum_failures = 0.0;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    sum_rerouting += reps[r].mean_rerouting_s / 60.0;
    sum_failures += reps[r].run.abandoned_count();
    const double n = static_cast<double>(r + 1);
    series.push_back({static_cast<int>(r + 1), sum_rerouting / n, sum_failures / n});
  }
  return series;
}

}  // namespace parkassign
