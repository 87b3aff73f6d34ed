#include "parkassign/arrivals.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "parkassign/io.h"
#include "parkassign/rng.h"

namespace parkassign {

double poisson_lambda(const Scenario& s) {
  return s.poisson_lambda.value_or(s.segments / 2.0 + 0.5);
}

ArrivalSchedule sample_arrivals(const Scenario& s, std::uint64_t seed) {
  const int k = s.vehicle_count;
  const double window = s.window_length();
  const double seg = window / s.segments;

  ArrivalSchedule sched;
  sched.times.resize(k);
  sched.entry_index.resize(k);

  Rng time_rng(derive_seed(seed, streams::kArrivalTimes));
  Rng entry_rng(derive_seed(seed, streams::kEntryLinks));
  std::uniform_int_distribution<int> entry_dist(
      0, static_cast<int>(s.entries.size()) - 1);

  if (s.arrival_mode == ArrivalMode::kUniform) {
    std::uniform_real_distribution<double> u(0.0, window);
    for (int v = 0; v < k; ++v) sched.times[v] = u(time_rng);
  } else {
    std::poisson_distribution<int> poisson(poisson_lambda(s));
    std::normal_distribution<double> noise(0.0, 1.0);
    const int p_max = s.segments - 1;
    for (int v = 0; v < k; ++v) {
      const int p = std::clamp(poisson(time_rng), 0, p_max);
      // Always draw the noise variate so sigma does not shift the stream.
      const double eps = noise(time_rng) * s.arrival_noise_sigma;
      sched.times[v] = std::clamp((p + 0.5) * seg + eps, 0.0, window);
    }
  }
  for (int v = 0; v < k; ++v) sched.entry_index[v] = entry_dist(entry_rng);

  sched.segment_histogram = bucket_by_segment(sched.times, window, s.segments);
  return sched;
}

std::vector<int> bucket_by_segment(const std::vector<double>& times,
                                   double window_length, int segments) {
  std::vector<int> counts(std::max(segments, 0), 0);
  if (segments <= 0) return counts;
  const double seg = window_length / segments;
  for (double t : times) {
    auto b = static_cast<long>(std::floor(t / seg));
    b = std::clamp<long>(b, 0, segments - 1);
    ++counts[b];
  }
  return counts;
}

void write_arrivals_csv(const ArrivalSchedule& sched,
                        const std::filesystem::path& path) {
  std::string out = "vehicle_id,arrival_seconds\n";
  for (std::size_t v = 0; v < sched.times.size(); ++v) {
    out += std::to_string(v) + "," + io::shortest(sched.times[v]) + "\n";
  }
  io::write_text(path, out);
}

}  // namespace parkassign
