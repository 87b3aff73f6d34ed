#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "parkassign/scenario.h"

namespace parkassign {

// When and where each vehicle enters the study region.
struct ArrivalSchedule {
  std::vector<double> times;        // seconds after window start
  std::vector<int> entry_index;     // index into Scenario::entries
  std::vector<int> segment_histogram;

  std::size_t size() const { return times.size(); }
  bool operator==(const ArrivalSchedule&) const = default;
};

/// Poisson mode: p ~ Poisson(lambda) clamped to [0, segments - 1] picks a
/// segment, the time is that segment's center plus N(0, sigma) noise, and
/// the result is clamped into the window. Uniform mode draws U[0, window].
/// Entry links are uniform. Pure in (scenario, seed).
ArrivalSchedule sample_arrivals(const Scenario& s, std::uint64_t seed);

double poisson_lambda(const Scenario& s);

/// Counts per half-open segment [k*d, (k+1)*d); the last segment is closed.
std::vector<int> bucket_by_segment(const std::vector<double>& times,
                                   double window_length, int segments);

/// Two-column CSV: vehicle_id,arrival_seconds.
void write_arrivals_csv(const ArrivalSchedule& sched,
                        const std::filesystem::path& path);

}  // namespace parkassign
