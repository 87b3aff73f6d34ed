#include "parkassign/assign.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "parkassign/io.h"
#include "parkassign/timing.h"

namespace parkassign {

Millis to_millis(double seconds) { return std::llround(seconds * 1000.0); }

std::int64_t AssignmentProblem::total_slots() const {
  std::int64_t total = 0;
  for (const auto& slots : slot_cost_ms) total += static_cast<std::int64_t>(slots.size());
  return total;
}

AssignmentProblem AssignmentProblem::from_costs(
    int vehicle_count, const std::vector<std::vector<Millis>>& lot_cost,
    const std::vector<std::vector<Millis>>& slot_cost) {
  AssignmentProblem p;
  p.vehicle_count = vehicle_count;
  const std::size_t lots = slot_cost.size();
  for (std::size_t i = 0; i < lots; ++i) p.lot_ids.push_back(static_cast<int>(i) + 1);
  p.slot_cost_ms = slot_cost;
  p.walk_s.assign(lots, 0.0);
  for (const auto& slots : slot_cost) {
    std::vector<double> s;
    for (Millis ms : slots) s.push_back(ms / 1000.0);
    p.search_s.push_back(std::move(s));
  }
  for (int k = 0; k < vehicle_count; ++k) {
    if (lot_cost.at(k).size() != lots) {
      throw std::invalid_argument("from_costs: row width differs from lot count");
    }
    for (std::size_t i = 0; i < lots; ++i) {
      p.lot_cost_ms.push_back(lot_cost[k][i]);
      p.drive_s.push_back(lot_cost[k][i] / 1000.0);
      p.lot_arrival_s.push_back(static_cast<double>(k));
    }
    p.entry_id.push_back(-1);
  }
  return p;
}

AssignmentProblem build_problem(const Scenario& s, const ScenarioGeometry& g,
                                const ArrivalSchedule& sched) {
  if (s.vehicle_count > s.total_capacity()) {
    throw InfeasibleProblem("demand of " + std::to_string(s.vehicle_count) +
                            " vehicles exceeds total capacity of " +
                            std::to_string(s.total_capacity()));
  }
  if (sched.size() != static_cast<std::size_t>(s.vehicle_count)) {
    throw std::invalid_argument("build_problem: schedule size mismatch");
  }
  const auto& k = s.kinematics;
  const std::size_t lots = s.lots.size();

  AssignmentProblem p;
  p.vehicle_count = s.vehicle_count;
  for (std::size_t i = 0; i < lots; ++i) {
    const ParkingLot& lot = s.lots[i];
    p.lot_ids.push_back(lot.id);
    p.walk_s.push_back(timing::walk_time(g.lots[i], g.destination, k));
    std::vector<double> search(lot.capacity);
    std::vector<Millis> search_ms(lot.capacity);
    for (int n = 1; n <= lot.capacity; ++n) {
      search[n - 1] =
          timing::search_time(timing::fill_lowest_first(lot, n - 1, k));
      search_ms[n - 1] = to_millis(search[n - 1]);
    }
    p.search_s.push_back(std::move(search));
    p.slot_cost_ms.push_back(std::move(search_ms));
  }

  const std::size_t n = static_cast<std::size_t>(s.vehicle_count);
  p.drive_s.resize(n * lots);
  p.lot_cost_ms.resize(n * lots);
  p.lot_arrival_s.resize(n * lots);
  p.entry_id.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const int e = sched.entry_index[v];
    p.entry_id[v] = s.entries[e].id;
    for (std::size_t i = 0; i < lots; ++i) {
      const double td = timing::drive_time(g.entries[e], g.lots[i], k);
      p.drive_s[v * lots + i] = td;
      p.lot_cost_ms[v * lots + i] = to_millis(td + p.walk_s[i]);
      p.lot_arrival_s[v * lots + i] = sched.times[v] + td;
    }
  }
  return p;
}

namespace {

void check_solvable(const AssignmentProblem& p) {
  if (p.vehicle_count < 0) throw std::invalid_argument("negative vehicle count");
  if (p.vehicle_count > p.total_slots()) {
    throw InfeasibleProblem("demand of " + std::to_string(p.vehicle_count) +
                            " vehicles exceeds total capacity of " +
                            std::to_string(p.total_slots()));
  }
  for (const auto& slots : p.slot_cost_ms) {
    for (std::size_t n = 0; n < slots.size(); ++n) {
      if (slots[n] < 0 || (n > 0 && slots[n] < slots[n - 1])) {
        throw std::invalid_argument(
            "slot costs must be non-negative and non-decreasing within a lot");
      }
    }
  }
  for (Millis c : p.lot_cost_ms) {
    if (c < 0) throw std::invalid_argument("lot costs must be non-negative");
  }
}

// Vehicles with identical lot-cost rows, in order of first appearance.
struct VehicleGroups {
  std::vector<std::vector<int>> members;
  std::vector<int> group_of;
};

VehicleGroups group_vehicles(const AssignmentProblem& p) {
  VehicleGroups out;
  out.group_of.resize(p.vehicle_count);
  std::map<std::vector<Millis>, int> index;
  const std::size_t lots = p.lot_count();
  for (int v = 0; v < p.vehicle_count; ++v) {
    std::vector<Millis> row(p.lot_cost_ms.begin() + v * lots,
                            p.lot_cost_ms.begin() + (v + 1) * lots);
    auto [it, inserted] =
        index.emplace(std::move(row), static_cast<int>(out.members.size()));
    if (inserted) out.members.emplace_back();
    out.members[it->second].push_back(v);
    out.group_of[v] = it->second;
  }
  return out;
}

}  // namespace

Assignment finalize_assignment(const AssignmentProblem& p,
                               std::vector<int> lot_of) {
  const std::size_t lots = p.lot_count();
  Assignment a;
  a.lot_of = std::move(lot_of);
  a.slot_of.assign(p.vehicle_count, 0);
  a.per_vehicle_cost.assign(p.vehicle_count, 0.0);

  std::vector<std::vector<int>> in_lot(lots);
  for (int v = 0; v < p.vehicle_count; ++v) in_lot[a.lot_of[v]].push_back(v);
  for (std::size_t i = 0; i < lots; ++i) {
    auto& vs = in_lot[i];
    std::stable_sort(vs.begin(), vs.end(), [&](int x, int y) {
      return p.lot_arrival_s[x * lots + i] < p.lot_arrival_s[y * lots + i];
    });
    for (std::size_t n = 0; n < vs.size(); ++n) {
      const int v = vs[n];
      a.slot_of[v] = static_cast<int>(n) + 1;
      a.per_vehicle_cost[v] =
          p.drive_s[v * lots + i] + p.search_s[i][n] + p.walk_s[i];
      a.total_cost_ms += p.cost(v, i, static_cast<int>(n) + 1);
    }
  }
  a.total_cost = std::accumulate(a.per_vehicle_cost.begin(),
                                 a.per_vehicle_cost.end(), 0.0);
  return a;
}

Assignment solve_exact(const AssignmentProblem& p) {
  check_solvable(p);
  const VehicleGroups groups = group_vehicles(p);
  const int n_groups = static_cast<int>(groups.members.size());
  const int n_lots = static_cast<int>(p.lot_count());

  // Node layout: source, groups, lots, sink.
  const int source = 0;
  const int lot0 = 1 + n_groups;
  const int sink = lot0 + n_lots;
  const int n_nodes = sink + 1;

  std::vector<Millis> group_cost(static_cast<std::size_t>(n_groups) * n_lots);
  for (int g = 0; g < n_groups; ++g) {
    for (int i = 0; i < n_lots; ++i) {
      group_cost[g * n_lots + i] = p.lot_cost(groups.members[g].front(), i);
    }
  }
  std::vector<int> supplied(n_groups, 0);
  std::vector<int> used(n_lots, 0);
  std::vector<int> flow(static_cast<std::size_t>(n_groups) * n_lots, 0);

  constexpr Millis kInf = std::numeric_limits<Millis>::max() / 4;
  std::vector<Millis> potential(n_nodes, 0);
  std::vector<Millis> dist(n_nodes);
  std::vector<int> parent(n_nodes);
  std::vector<char> done(n_nodes);

  for (int unit = 0; unit < p.vehicle_count; ++unit) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    dist[source] = 0;

    auto relax = [&](int from, int to, Millis cost) {
      const Millis reduced = cost + potential[from] - potential[to];
      if (dist[from] + reduced < dist[to]) {
        dist[to] = dist[from] + reduced;
        parent[to] = from;
      }
    };

    // Dense Dijkstra; the compressed network has few nodes.
    for (;;) {
      int u = -1;
      for (int v = 0; v < n_nodes; ++v) {
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0 || u == sink) break;
      done[u] = 1;
      if (u == source) {
        for (int g = 0; g < n_groups; ++g) {
          if (supplied[g] < static_cast<int>(groups.members[g].size())) {
            relax(source, 1 + g, 0);
          }
        }
      } else if (u < lot0) {
        const int g = u - 1;
        for (int i = 0; i < n_lots; ++i) relax(u, lot0 + i, group_cost[g * n_lots + i]);
      } else {
        const int i = u - lot0;
        for (int g = 0; g < n_groups; ++g) {
          if (flow[g * n_lots + i] > 0) relax(u, 1 + g, -group_cost[g * n_lots + i]);
        }
        if (used[i] < p.capacity(i)) relax(u, sink, p.slot_cost_ms[i][used[i]]);
      }
    }
    if (dist[sink] >= kInf) {
      throw InfeasibleProblem("no augmenting path; capacity exhausted");
    }

    for (int v = 0; v < n_nodes; ++v) {
      potential[v] += std::min(dist[v], dist[sink]);
    }

    for (int v = sink; v != source; v = parent[v]) {
      const int u = parent[v];
      if (v == sink) {
        ++used[u - lot0];
      } else if (u == source) {
        ++supplied[v - 1];
      } else if (u < lot0) {
        ++flow[(u - 1) * n_lots + (v - lot0)];
      } else {
        --flow[(v - 1) * n_lots + (u - lot0)];
      }
    }
  }

  std::vector<int> lot_of(p.vehicle_count, -1);
  for (int g = 0; g < n_groups; ++g) {
    const auto& members = groups.members[g];
    std::size_t next = 0;
    for (int i = 0; i < n_lots; ++i) {
      for (int c = 0; c < flow[g * n_lots + i]; ++c) lot_of[members[next++]] = i;
    }
  }
  return finalize_assignment(p, std::move(lot_of));
}

BruteForceResult brute_force_solve(const AssignmentProblem& p) {
  check_solvable(p);
  const int n_lots = static_cast<int>(p.lot_count());
  const int k = p.vehicle_count;

  double maps = std::pow(static_cast<double>(std::max(n_lots, 1)), k);
  if (maps > static_cast<double>(kBruteForceLimit)) {
    throw InstanceTooLarge("brute force over " + std::to_string(n_lots) +
                           "^" + std::to_string(k) + " maps exceeds limit");
  }

  // prefix[i][c] = total search cost of the first c slots of lot i.
  std::vector<std::vector<Millis>> prefix(n_lots);
  for (int i = 0; i < n_lots; ++i) {
    prefix[i].assign(p.capacity(i) + 1, 0);
    for (int c = 1; c <= p.capacity(i); ++c) {
      prefix[i][c] = prefix[i][c - 1] + p.slot_cost_ms[i][c - 1];
    }
  }

  BruteForceResult result;
  std::vector<int> current(k, 0);
  std::vector<int> counts(n_lots, 0);
  std::vector<int> best;
  Millis best_cost = std::numeric_limits<Millis>::max();

  auto evaluate = [&] {
    ++result.feasible_lot_maps;
    std::int64_t slot_maps = 1;
    Millis cost = 0;
    for (int v = 0; v < k; ++v) cost += p.lot_cost(v, current[v]);
    for (int i = 0; i < n_lots; ++i) {
      cost += prefix[i][counts[i]];
      for (int c = 0; c < counts[i]; ++c) slot_maps *= p.capacity(i) - c;
    }
    result.feasible_slot_maps += slot_maps;
    if (cost < best_cost) {
      best_cost = cost;
      best = current;
    }
  };

  auto recurse = [&](auto&& self, int v) -> void {
    if (v == k) {
      evaluate();
      return;
    }
    for (int i = 0; i < n_lots; ++i) {
      if (counts[i] == p.capacity(i)) continue;
      ++counts[i];
      current[v] = i;
      self(self, v + 1);
      --counts[i];
    }
  };
  recurse(recurse, 0);

  result.assignment = finalize_assignment(p, best);
  return result;
}

std::vector<int> lot_counts(const Assignment& a, std::size_t lot_count) {
  std::vector<int> counts(lot_count, 0);
  for (int lot : a.lot_of) {
    if (lot < 0 || static_cast<std::size_t>(lot) >= lot_count) {
      throw InfeasibleProblem("vehicle assigned to unknown lot index " +
                              std::to_string(lot));
    }
    ++counts[lot];
  }
  return counts;
}

Millis assignment_cost(const Assignment& a, const AssignmentProblem& p) {
  if (a.lot_of.size() != static_cast<std::size_t>(p.vehicle_count)) {
    throw InfeasibleProblem("assignment covers " +
                            std::to_string(a.lot_of.size()) + " of " +
                            std::to_string(p.vehicle_count) + " vehicles");
  }
  const auto counts = lot_counts(a, p.lot_count());
  Millis total = 0;
  for (std::size_t i = 0; i < p.lot_count(); ++i) {
    if (counts[i] > p.capacity(i)) {
      throw InfeasibleProblem("lot " + std::to_string(p.lot_ids[i]) +
                              " over capacity: " + std::to_string(counts[i]) +
                              " > " + std::to_string(p.capacity(i)));
    }
    for (int c = 0; c < counts[i]; ++c) total += p.slot_cost_ms[i][c];
  }
  for (int v = 0; v < p.vehicle_count; ++v) total += p.lot_cost(v, a.lot_of[v]);
  return total;
}

bool certify_optimal(const Assignment& a, const AssignmentProblem& p) {
  std::vector<int> counts;
  try {
    assignment_cost(a, p);
    counts = lot_counts(a, p.lot_count());
  } catch (const InfeasibleProblem&) {
    return false;
  }
  const VehicleGroups groups = group_vehicles(p);
  const int n_groups = static_cast<int>(groups.members.size());
  const int n_lots = static_cast<int>(p.lot_count());
  std::vector<int> flow(static_cast<std::size_t>(n_groups) * n_lots, 0);
  for (int v = 0; v < p.vehicle_count; ++v) {
    ++flow[groups.group_of[v] * n_lots + a.lot_of[v]];
  }

  struct Arc {
    int from, to;
    Millis cost;
  };
  const int lot0 = n_groups;
  const int sink = lot0 + n_lots;
  std::vector<Arc> arcs;
  for (int g = 0; g < n_groups; ++g) {
    for (int i = 0; i < n_lots; ++i) {
      const Millis c = p.lot_cost(groups.members[g].front(), i);
      arcs.push_back({g, lot0 + i, c});
      if (flow[g * n_lots + i] > 0) arcs.push_back({lot0 + i, g, -c});
    }
  }
  for (int i = 0; i < n_lots; ++i) {
    if (counts[i] < p.capacity(i)) {
      arcs.push_back({lot0 + i, sink, p.slot_cost_ms[i][counts[i]]});
    }
    if (counts[i] > 0) {
      arcs.push_back({sink, lot0 + i, -p.slot_cost_ms[i][counts[i] - 1]});
    }
  }

  // Bellman-Ford from a virtual root connected to every node at cost 0.
  const int n_nodes = sink + 1;
  std::vector<Millis> pi(n_nodes, 0);
  for (int round = 0; round < n_nodes; ++round) {
    bool changed = false;
    for (const Arc& arc : arcs) {
      if (pi[arc.from] + arc.cost < pi[arc.to]) {
        pi[arc.to] = pi[arc.from] + arc.cost;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return std::all_of(arcs.begin(), arcs.end(), [&](const Arc& arc) {
    return arc.cost + pi[arc.from] - pi[arc.to] >= 0;
  });
}

void write_assignment_csv(const Assignment& a, const AssignmentProblem& p,
                          const std::filesystem::path& path) {
  std::string out = "vehicle_id,entry_id,lot_id,TD_s,TS_s,TW_s,total_s\n";
  const std::size_t lots = p.lot_count();
  for (int v = 0; v < p.vehicle_count; ++v) {
    const int i = a.lot_of[v];
    out += std::to_string(v) + "," + std::to_string(p.entry_id[v]) + "," +
           std::to_string(p.lot_ids[i]) + "," +
           io::shortest(p.drive_s[v * lots + i]) + "," +
           io::shortest(p.search_s[i][a.slot_of[v] - 1]) + "," +
           io::shortest(p.walk_s[i]) + "," +
           io::shortest(a.per_vehicle_cost[v]) + "\n";
  }
  io::write_text(path, out);
}

}  // namespace parkassign
